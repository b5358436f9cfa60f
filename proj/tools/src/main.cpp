#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "nlsctl/errors.hpp"
#include "nlsctl_cli/config.hpp"
#include "nlsctl_cli/scenario.hpp"

namespace {

using nlsctl::cli::Json;

struct Arguments {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
};

// Overrides are applied to the raw document so that every derived default
// (target and stability seeds) follows the overridden base seed.
nlsctl::cli::RunConfig load_with_overrides(const Arguments& args) {
  std::ifstream in(args.config);
  if (!in) throw nlsctl::cli::ConfigError("--config", "cannot read " + args.config);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw nlsctl::cli::ConfigError("<file>", e.what());
  }
  if (!doc.is_object()) throw nlsctl::cli::ConfigError("<root>", "expected an object");
  if (args.seed) doc["mc"]["base_seed"] = *args.seed;
  if (args.paths) doc["mc"]["paths"] = *args.paths;
  return nlsctl::cli::parse_config(doc, std::filesystem::path(args.config).parent_path());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilinear optimal control of stochastic nonlinear Schrodinger equations"};
  app.require_subcommand(1);

  Arguments args;
  std::string selected;
  for (const char* name : {"forward", "optimize", "gradcheck", "diagnose", "stability"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output directory")->capture_default_str();
    sub->add_option("--seed", args.seed, "override mc.base_seed");
    sub->add_option("--paths", args.paths, "override mc.paths");
    sub->callback([&selected, name] { selected = name; });
  }
  app.get_subcommand("forward")->description("one trajectory, norms CSV and binary dump");
  app.get_subcommand("optimize")->description("run the optimizer; report JSON and control CSV");
  app.get_subcommand("gradcheck")->description("adjoint gradient against finite differences");
  app.get_subcommand("diagnose")->description("V^p, temporal regularity and embedding diagnostics");
  app.get_subcommand("stability")->description("sweep of state error against perturbation size");

  auto* defaults = app.add_subcommand("defaults", "print the effective default configuration");
  defaults->callback([&selected] { selected = "defaults"; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (selected == "defaults") {
      std::cout << nlsctl::cli::to_json(nlsctl::cli::parse_config(Json::object())).dump(2) << '\n';
      return nlsctl::cli::kExitOk;
    }
    const auto config = load_with_overrides(args);
    nlsctl::cli::validate(config);
    const auto result =
        nlsctl::cli::run_scenario(config, nlsctl::cli::parse_subcommand(selected), args.out);
    for (const auto& f : result.files) std::cout << (std::filesystem::path(args.out) / f).string() << '\n';
    return nlsctl::cli::kExitOk;
  } catch (const nlsctl::cli::ConfigError& e) {
    std::cerr << "config error at " << e.what() << '\n';
    return nlsctl::cli::kExitConfig;
  } catch (const nlsctl::BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << " (last valid time " << e.last_valid_time() << ")\n";
    return nlsctl::cli::kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nlsctl::cli::kExitFailure;
  }
}
