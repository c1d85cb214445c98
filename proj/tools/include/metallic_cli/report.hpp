#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace metallic::cli {

inline constexpr const char* kToolName = "metallic";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kPass = 0, kCheckFailed = 1, kParseError = 2, kWrongBranch = 3, kNumericFailure = 4 };

/// Rounds to 4 significant figures; both renderings print this value.
double round4(double v);
/// Shortest text of the rounded value ("2.25", "1.234e-15", "nan").
std::string format4(double v);

struct Row {
  std::string check;
  std::optional<double> residual;   // measured value
  std::optional<double> threshold;  // absent for informational rows
  std::string verdict;              // pass/fail for checks, yes/no/info for facts
  std::string location;             // module.operation @ fixture
  bool counts = false;              // a failed verdict sets exit 1
};

class Report {
 public:
  Report(std::string command, std::string spec, std::string digest);

  void setting(const std::string& key, const std::string& value);
  /// A check: pass when residual < threshold.
  void check(const std::string& name, double residual, double threshold,
             const std::string& location);
  /// A verdict that is not a failure either way.
  void fact(const std::string& name, bool yes, const std::string& location,
            std::optional<double> value = std::nullopt, std::optional<double> threshold = std::nullopt);
  void info(const std::string& name, double value, const std::string& location);
  /// A boolean requirement; fails the command when false.
  void require(const std::string& name, bool ok, const std::string& location,
               std::optional<double> value = std::nullopt);

  const std::vector<Row>& rows() const { return rows_; }
  int exit_code() const;
  const Row* find(const std::string& check) const;

  std::string text() const;
  std::string json() const;

 private:
  std::string command_;
  std::string spec_;
  std::string digest_;
  std::vector<std::pair<std::string, std::string>> settings_;
  std::vector<Row> rows_;
};

}  // namespace metallic::cli
