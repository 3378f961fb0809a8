// Command-line front end: one subcommand per computation, JSON config plus --set overrides.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqed/error.hpp"
#include "cqed/runs.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kNumericalFailure = 2 };

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("-c,--config", common.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--set", common.overrides, "Override a config key, e.g. --set params.g0=33.9")
      ->type_name("KEY=VALUE")
      ->allow_extra_args(false);
}

// Writes to output.path, or standard output when it is empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw cqed::ConfigError("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int run(const std::string& command, const cqed::RunConfig& config) {
  Sink sink(config.output_path);
  std::ostream& out = sink.stream();
  if (command == "eigen") {
    cqed::write_eigen(out, config, cqed::run_eigen(config));
    return kOk;
  }
  if (command == "spectrum" || command == "atom-drive") {
    const auto table = command == "spectrum" ? cqed::run_spectrum(config) : cqed::run_atom_drive(config);
    cqed::write_sweep(out, config, table);
    const int failed = table.failed_points();
    if (failed > 0) std::cerr << "warning: " << failed << " of " << table.rows.size() << " points failed\n";
    return !table.rows.empty() && failed == static_cast<int>(table.rows.size()) ? kNumericalFailure : kOk;
  }
  if (command == "g2tau") {
    const auto result = cqed::run_g2tau(config);
    cqed::write_tau(out, config, result);
    if (result.first_crossing_ns)
      std::cerr << "g2(tau) first reaches 1 at " << *result.first_crossing_ns << " ns\n";
    else
      std::cerr << "g2(tau) stays below 1 on the grid\n";
    return kOk;
  }
  if (command == "convergence-check") {
    const auto result = cqed::run_convergence_check(config);
    cqed::write_convergence(out, config, result);
    std::cerr << "relative change " << result.relative_change << (result.converged ? " (converged)\n" : " (NOT converged)\n");
    return kOk;
  }
  if (command == "filter") {
    cqed::write_filter(out, config, cqed::run_filter(config));
    return kOk;
  }
  throw std::logic_error("unhandled subcommand " + command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity QED photon-blockade toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  Common common;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"eigen", "Eigenvalue factors of the excitation manifolds (CSV: n,k,epsilon,degeneracy)"},
      {"spectrum", "Cavity-driven transmission and g2(0) versus probe detuning"},
      {"g2tau", "Intensity correlation g2(tau) at one probe detuning"},
      {"atom-drive", "Atom-driven transmission and g2(0) versus probe detuning"},
      {"filter", "Fock-state transmission model applied to a coherent input (JSON)"},
      {"convergence-check", "Compare g2(0) at the configured Fock cutoffs and one photon more"},
  };
  bool print_config = false;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, common);
    sub->add_flag("--print-config", print_config, "Print the resolved configuration as JSON and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  cqed::RunConfig config;
  try {
    config = cqed::load_config(common.config_path, common.overrides);
  } catch (const cqed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (print_config) {
    std::cout << cqed::to_json(config).dump(2) << '\n';
    return kOk;
  }

  try {
    return run(command, config);
  } catch (const cqed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
