#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace metallic::cli {

struct Options {
  double tol = 1e-8;
  std::optional<int> samples;          // default: [manifold] samples, else 50
  std::optional<std::uint64_t> seed;   // default: [manifold] seed, else 0
  bool json = false;
  std::optional<double> a, b, c;       // chen
  std::string convention = "argumentwise";  // forms
  std::string op;                      // forms: apply one operator
  std::string target;                  // map: target spec
  std::string map;                     // map: map file
};

struct Outcome {
  int exit = 0;
  std::string out;  // report, for stdout
  std::string err;  // diagnostics, for stderr
};

inline constexpr const char* kCommands[] = {"validate", "tensors", "connections", "foliate",
                                            "chen",     "norden",  "forms",       "map"};

/// Runs one subcommand on a spec file. Never throws.
Outcome run_command(const std::string& command, const std::string& spec_path, const Options& opt);

}  // namespace metallic::cli
