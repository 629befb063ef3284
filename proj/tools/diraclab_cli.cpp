#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace diraclab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Dirac zero-mode verification campaigns"};
  std::string command, check, config_path;
  app.add_option("command", command, "algebra-verify, inversion-verify, norms, inequality-check, extremal-search, zero-mode or coupling-scan")
      ->required();
  app.add_option("check", check, "zero-mode check: all, oracle, theorem3, theorem4, residual, decay or weighted");
  app.add_option("--config", config_path, "flat key = value configuration file");

  // One flag per configuration key; flags override the file.
  std::map<std::string, std::string> flags;
  for (const auto& spec : known_keys()) {
    std::string flag = spec.key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    app.add_option("--" + flag, flags[spec.key], spec.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_config;
  }

  try {
    Invocation inv{command, check, config_path.empty() ? RunConfig{} : parse_config_file(config_path)};
    for (const auto& spec : known_keys()) {
      std::string flag = spec.key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (app.count("--" + flag) > 0) inv.config.set(spec.key, flags[spec.key]);
    }
    return run(inv, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  }
}
