// Command-line driver: check, solve, pohozaev, sweep and eigen subcommands.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dualmp/dualmp.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  bool force = false;
  int grid_doubling = -1;
  std::vector<std::string> overrides;
  bool print_config = false;
};

dualmp::ExperimentConfig resolve(const Options& o) {
  std::string text;
  dualmp::ExperimentConfig base;
  if (!o.config_path.empty()) base = dualmp::load_config(o.config_path);
  text = dualmp::write_config(base);
  for (const auto& kv : o.overrides) text += kv + "\n";
  dualmp::ExperimentConfig cfg = dualmp::parse_config(text);
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  if (o.force) cfg.force = true;
  if (o.grid_doubling >= 0) cfg.grid_doubling = o.grid_doubling;
  return cfg;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "config file (flat key = value)");
  sub->add_option("--out", o.out_dir, "output directory, created if missing");
  sub->add_flag("--force", o.force, "solve even when the parameters are outside the existence theorem");
  sub->add_option("--grid-doubling", o.grid_doubling, "number of grid refinements (n -> 2n - 1)")
      ->check(CLI::Range(0, 4));
  sub->add_option("--set", o.overrides, "override one config entry, e.g. --set params.p=3");
  sub->add_flag("--print-config", o.print_config, "print the resolved config and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual mountain-pass solver for Hamiltonian elliptic systems with logarithmic nonlinearities"};
  app.require_subcommand(1);
  Options o;
  CLI::App* check = app.add_subcommand("check", "run the invariant suite");
  CLI::App* solve = app.add_subcommand("solve", "mountain-pass solve with report and field dumps");
  CLI::App* poh = app.add_subcommand("pohozaev", "solve, then the Pohozaev balance and identity refinement");
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  CLI::App* eigen = app.add_subcommand("eigen", "principal Dirichlet eigenpair under refinement");
  for (CLI::App* s : {check, solve, poh, sweep, eigen}) add_common(s, o);
  CLI11_PARSE(app, argc, argv);

  dualmp::ExperimentConfig cfg;
  try {
    cfg = resolve(o);
    if (o.print_config) {
      std::cout << dualmp::write_config(cfg);
      return dualmp::exit_ok;
    }
    if (!sweep->parsed() && !eigen->parsed()) cfg.validate();
  } catch (const dualmp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dualmp::exit_io;
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return dualmp::exit_failure;
  }

  try {
    if (check->parsed()) return dualmp::run_suite(cfg, std::cout);
    if (solve->parsed()) return dualmp::run_solve(cfg, std::cout);
    if (poh->parsed()) return dualmp::run_pohozaev(cfg, std::cout);
    if (sweep->parsed()) return dualmp::run_sweep(cfg, std::cout);
    if (eigen->parsed()) return dualmp::run_eigen(cfg, std::cout);
  } catch (const dualmp::GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return dualmp::exit_geometry;
  } catch (const dualmp::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return dualmp::exit_io;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return dualmp::exit_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dualmp::exit_failure;
  }
  return dualmp::exit_failure;
}
