#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metallic/errors.hpp"
#include "metallic/forms.hpp"
#include "metallic/structure.hpp"

namespace metallic::cli {

/// Malformed spec text; `line` and `column` are 1-based.
class SpecError : public ParseError {
 public:
  SpecError(const std::string& file, std::size_t line, std::size_t column, const std::string& msg);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return msg_; }
  const char* what() const noexcept override { return full_.c_str(); }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string msg_;
  std::string full_;
};

struct FormEntry {
  int degree = 0;
  ComplexForm form;
};

struct ManifoldSpec {
  std::string name;
  std::string source;  // file name, for messages
  int dim = 0;
  std::vector<bool> periodic;
  double p = 0, q = 0;
  std::vector<std::vector<std::string>> metric;
  std::vector<std::vector<std::string>> endomorphism;
  Point lo, hi;
  int samples = 50;
  std::uint64_t seed = 0;
  std::vector<Point> points;
  /// Target-coordinate components, when the file has a [map] section.
  std::vector<std::string> map;
  std::vector<FormEntry> forms;
  std::string digest;  // fnv1a-64 of the bytes

  bool has_structure() const { return !metric.empty() && !endomorphism.empty(); }
  bool all_periodic() const;
  Structure structure() const;
  /// [points] when present, otherwise `count` Halton points in the box.
  std::vector<Point> sample_points(int count, std::uint64_t seed) const;
};

/// FNV-1a 64-bit hash, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

ManifoldSpec parse_spec(const std::string& text, const std::string& source = "<spec>");
ManifoldSpec load_spec(const std::string& path);

}  // namespace metallic::cli
