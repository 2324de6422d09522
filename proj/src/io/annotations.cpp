#include <charconv>

#include "approach/error.hpp"
#include "approach/io.hpp"
#include "io/text.hpp"

namespace approach::io {
namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool skip_line(std::string_view line) {
  const auto tokens = detail::split_ws(line);
  return tokens.empty() || tokens.front().front() == '#';
}

std::string where(int line_no) { return "line " + std::to_string(line_no); }

}  // namespace

std::vector<BoundingBox> parse_bboxes(std::string_view text) {
  std::vector<BoundingBox> boxes;
  int line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 6) {
      throw Error(ErrorCode::kParseError,
                  "bbox " + where(line_no) + " has " + std::to_string(tokens.size()) +
                      " fields, expected 6");
    }
    const std::string ctx = "bbox " + where(line_no);
    const int frame = detail::parse_int(tokens[0], ctx);
    if (frame < 0) throw Error(ErrorCode::kParseError, ctx + ": negative frame index");
    double v[4];
    for (int i = 0; i < 4; ++i) v[i] = detail::parse_double(tokens[2 + i], ctx);
    boxes.push_back(BoundingBox::make(frame, std::string(tokens[1]), v[0], v[1], v[2], v[3]));
  }
  return boxes;
}

std::vector<BoundingBox> read_bboxes(const fs::path& path) {
  return parse_bboxes(read_text(path));
}

std::string format_bboxes(const std::vector<BoundingBox>& boxes) {
  std::string out;
  for (const auto& b : boxes) {
    out += std::to_string(b.frame) + " " + b.label + " " + shortest(b.rect.u_min) + " " +
           shortest(b.rect.v_min) + " " + shortest(b.rect.u_max) + " " +
           shortest(b.rect.v_max) + "\n";
  }
  return out;
}

std::vector<ObjectTruth> parse_object_positions(std::string_view text) {
  std::vector<ObjectTruth> out;
  int line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 4) {
      throw Error(ErrorCode::kParseError, "object " + where(line_no) + " has " +
                                              std::to_string(tokens.size()) +
                                              " fields, expected 4");
    }
    const std::string ctx = "object " + where(line_no);
    ObjectTruth t;
    t.frame = detail::parse_int(tokens[0], ctx);
    for (int i = 0; i < 3; ++i) t.position(i) = detail::parse_double(tokens[1 + i], ctx);
    out.push_back(t);
  }
  return out;
}

std::vector<ObjectTruth> read_object_positions(const fs::path& path) {
  return parse_object_positions(read_text(path));
}

}  // namespace approach::io
