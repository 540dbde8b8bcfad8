#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dnls/config.hpp"
#include "dnls/errors.hpp"
#include "dnls/experiments.hpp"

namespace {

constexpr int kConfigExit = 2;

void print_config_error(const dnls::ConfigError& e) {
  std::cerr << "configuration error:\n";
  for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
}

int cmd_validate(const std::string& path) {
  const auto cfg = dnls::load_config(path);
  dnls::preflight(cfg);
  std::cout << "valid " << dnls::to_string(cfg.experiment) << " config\n";
  for (const auto& [k, v] : dnls::config_echo(cfg)) std::cout << k << " = " << v << "\n";
  return 0;
}

int cmd_run(const std::string& path, const std::string& root_flag) {
  const auto cfg = dnls::load_config(path);
  const auto report = dnls::run_experiment(cfg);
  const auto root = root_flag.empty() ? dnls::output_root() : std::filesystem::path(root_flag);
  const auto files = dnls::write_report(report, root);
  for (const auto& c : report.checks) {
    std::printf("%s %s: %.6g %s %.6g\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.relation.c_str(),
                c.threshold);
  }
  for (const auto& c : report.caveats) std::printf("caveat: %s\n", c.c_str());
  if (!report.error.empty()) std::printf("error: %s\n", report.error.c_str());
  std::printf("status: %s (%.2f s)\n", dnls::to_string(report.status).c_str(), report.wall_seconds);
  std::printf("wrote %s\n", files.json.parent_path().string().c_str());
  return dnls::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the derivative NLS on a non-vanishing background"};
  app.set_version_flag("--version", dnls::kArtifactVersion);
  app.require_subcommand(1);

  std::string config_path, root;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--output-root", root,
                  std::string("output directory (default: $") + dnls::kOutputRootEnv + " or ./dnls-lab-output)");
  auto* validate = app.add_subcommand("validate", "check a config file without running it");
  validate->add_option("config", config_path, "config file")->required();
  auto* list = app.add_subcommand("list-experiments", "print the experiment names");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*list) {
      for (const auto& n : dnls::experiment_names()) std::cout << n << "\n";
      return 0;
    }
    if (*validate) return cmd_validate(config_path);
    return cmd_run(config_path, root);
  } catch (const dnls::ConfigError& e) {
    print_config_error(e);
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
