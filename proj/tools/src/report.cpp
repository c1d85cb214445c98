#include "metallic_cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace metallic::cli {

double round4(double v) {
  if (!std::isfinite(v) || v == 0) return v == 0 ? 0.0 : v;  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return std::strtod(buf, nullptr);
}

std::string format4(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", round4(v));
  return buf;
}

Report::Report(std::string command, std::string spec, std::string digest)
    : command_(std::move(command)), spec_(std::move(spec)), digest_(std::move(digest)) {}

void Report::setting(const std::string& key, const std::string& value) {
  settings_.emplace_back(key, value);
}

void Report::check(const std::string& name, double residual, double threshold,
                   const std::string& location) {
  const bool ok = std::isfinite(residual) && residual < threshold;
  rows_.push_back({name, residual, threshold, ok ? "pass" : "fail", location, true});
}

void Report::fact(const std::string& name, bool yes, const std::string& location,
                  std::optional<double> value, std::optional<double> threshold) {
  rows_.push_back({name, value, threshold, yes ? "yes" : "no", location, false});
}

void Report::info(const std::string& name, double value, const std::string& location) {
  rows_.push_back({name, value, std::nullopt, "info", location, false});
}

void Report::require(const std::string& name, bool ok, const std::string& location,
                     std::optional<double> value) {
  rows_.push_back({name, value, std::nullopt, ok ? "pass" : "fail", location, true});
}

int Report::exit_code() const {
  for (const Row& r : rows_)
    if (r.counts && r.verdict == "fail") return kCheckFailed;
  return kPass;
}

const Row* Report::find(const std::string& check) const {
  for (const Row& r : rows_)
    if (r.check == check) return &r;
  return nullptr;
}

std::string Report::text() const {
  std::ostringstream out;
  out << kToolName << ' ' << kToolVersion << "  " << command_ << "  " << spec_ << "  fnv1a:"
      << digest_ << '\n';
  for (std::size_t i = 0; i < settings_.size(); ++i)
    out << (i ? "  " : "") << settings_[i].first << ' ' << settings_[i].second;
  if (!settings_.empty()) out << '\n';

  std::size_t w = 5;
  for (const Row& r : rows_) w = std::max(w, r.check.size());
  auto pad = [](const std::string& s, std::size_t n) {
    return s + std::string(n > s.size() ? n - s.size() : 1, ' ');
  };
  out << pad("check", w + 2) << pad("value", 12) << pad("threshold", 12) << pad("verdict", 9)
      << "location\n";
  for (const Row& r : rows_) {
    out << pad(r.check, w + 2) << pad(r.residual ? format4(*r.residual) : "-", 12)
        << pad(r.threshold ? format4(*r.threshold) : "-", 12) << pad(r.verdict, 9) << r.location
        << '\n';
  }
  out << "exit " << exit_code() << '\n';
  return out.str();
}

std::string Report::json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command_;
  j["spec"] = spec_;
  j["digest"] = "fnv1a:" + digest_;
  ordered_json settings = ordered_json::object();
  for (const auto& [k, v] : settings_) settings[k] = v;
  j["settings"] = settings;
  ordered_json rows = ordered_json::array();
  auto num = [](const std::optional<double>& v) -> ordered_json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return round4(*v);
  };
  for (const Row& r : rows_) {
    ordered_json row;
    row["check"] = r.check;
    row["residual"] = num(r.residual);
    row["threshold"] = num(r.threshold);
    row["verdict"] = r.verdict;
    row["location"] = r.location;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["exit"] = exit_code();
  return j.dump(2) + "\n";
}

}  // namespace metallic::cli
