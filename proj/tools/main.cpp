#include <iostream>

#include <CLI11.hpp>

#include "metallic_cli/commands.hpp"
#include "metallic_cli/report.hpp"

int main(int argc, char** argv) {
  using namespace metallic::cli;
  CLI::App app{"Checks metallic pseudo-Riemannian structures given in spec files."};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Options opt;
  std::string spec;
  std::string output = "text";
  double a = 0, b = 0, c = 0;
  int samples = 0;
  std::uint64_t seed = 0;

  for (const char* name : kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("spec", spec, "manifold spec file")->required();
    sub->add_option("--tol", opt.tol, "threshold for checks")->capture_default_str();
    sub->add_option("--samples", samples, "Halton sample count (default: spec, else 50)");
    sub->add_option("--seed", seed, "Halton sequence offset (default: spec, else 0)");
    sub->add_option("--output", output, "text or json")->check(CLI::IsMember({"text", "json"}));
    if (std::string(name) == "chen") {
      sub->add_option("--a", a)->required();
      sub->add_option("--b", b)->required();
      sub->add_option("--c", c)->required();
    }
    if (std::string(name) == "forms") {
      sub->add_option("--convention", opt.convention, "argumentwise, affine or graded")
          ->capture_default_str();
      sub->add_option("--operator", opt.op, "apply one operator instead of the identity table");
    }
    if (std::string(name) == "map") {
      sub->add_option("--target", opt.target, "target manifold spec")->required();
      sub->add_option("--map", opt.map, "map file with a [map] section")->required();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--samples")) opt.samples = samples;
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->get_name() == "chen") opt.a = a, opt.b = b, opt.c = c;
  opt.json = output == "json";

  const Outcome o = run_command(sub->get_name(), spec, opt);
  std::cout << o.out;
  std::cerr << o.err;
  return o.exit;
}
