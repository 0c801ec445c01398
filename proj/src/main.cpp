#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "apkin/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"apkin: IMEX Runge-Kutta solvers and tableau analysis for stiff "
               "kinetic equations"};
  app.require_subcommand(1);

  std::string config_file;
  // CLI values land here as (key, value) pairs and are applied after the
  // config file, so the command line always wins.
  std::vector<std::pair<std::string, std::string>> overrides;
  const auto capture = [&overrides](const std::string& key) {
    return [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); };
  };

  for (const char* name : {"analyze", "simulate", "converge"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option_function<std::string>("--config",
                                          [&config_file](const std::string& v) { config_file = v; },
                                          "flat key = value configuration file");
    sub->add_option_function<std::string>("--scheme", capture("scheme"),
                                          "scheme name from the registry, or 'all' (analyze)");
    sub->add_option_function<std::string>("--eps", capture("eps"), "Knudsen number");
    sub->add_option_function<std::string>("--nx", capture("nx"),
                                          "space cells; comma list for converge");
    sub->add_option_function<std::string>("--nv", capture("nv"), "velocity nodes per direction");
    sub->add_option_function<std::string>("--vmax", capture("vmax"), "velocity box half-width");
    sub->add_option_function<std::string>("--tfinal", capture("t_final"), "final time");
    sub->add_option_function<std::string>("--cfl", capture("cfl"), "CFL number");
    sub->add_option_function<std::string>("--operator", capture("operator"),
                                          "collision operator: bgk | boltzmann");
    sub->add_flag_callback("--penalized",
                           [&overrides] { overrides.emplace_back("penalized", "true"); },
                           "use the penalized stepper (boltzmann only)");
    sub->add_option_function<std::string>("--init", capture("init"),
                                          "initial data: eq | noneq");
    sub->add_option_function<std::string>("--out", capture("out"), "output directory");
    sub->add_option_function<std::string>("--seed", capture("seed"),
                                          "seed for randomized property checks");
    sub->add_option_function<std::string>("--reference", capture("reference"),
                                          "converge reference: self | rk4");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  apkin::RunConfig cfg;
  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    apkin::apply_config_entry(cfg, "command", sub);
    if (sub == "converge") cfg.nx = {32, 64, 128, 256};  // desk-scale default list
    if (!config_file.empty()) cfg = apkin::load_run_config(config_file, cfg);
    // re-assert the subcommand: the file must not redirect it
    apkin::apply_config_entry(cfg, "command", sub);
    for (const auto& [key, value] : overrides) apkin::apply_config_entry(cfg, key, value);
  } catch (const apkin::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  return apkin::run_command(cfg, std::cout, std::cerr);
}
