#include <cstdio>
#include "approach/features.hpp"
int main() {
  auto p = approach::generate_pattern(approach::kPatternSeed);
  std::printf("// Generated by tools/gen_pattern from kPatternSeed; do not edit.\n");
  std::printf("constexpr std::int8_t kPatternTable[256][4] = {\n");
  for (auto& q : p.pairs) std::printf("    {%d, %d, %d, %d},\n", q[0], q[1], q[2], q[3]);
  std::printf("};\n");
}
