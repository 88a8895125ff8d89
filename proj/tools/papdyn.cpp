#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "papdyn/commands.hpp"
#include "papdyn/config.hpp"
#include "papdyn/error.hpp"

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw papdyn::ConfigError("cannot write " + path.string());
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo almost periodic solutions and stability of delayed high-order Hopfield networks"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<double> step;
  std::optional<double> tol;

  const char* commands[][2] = {
      {"check", "Evaluate the hypotheses and the contraction constants"},
      {"simulate", "Integrate the delayed system from its history"},
      {"solve", "Picard iteration for the pseudo almost periodic solution"},
      {"stability", "Decay-rate certificate and envelope verification"},
      {"ergodic", "Ergodicity trend of every coefficient's decaying part"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Config document (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--step", step, "Integrator step");
    sub->add_option("--tol", tol, "Picard tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : papdyn::kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    papdyn::RunConfig cfg = papdyn::load_config(config_path);
    if (step) {
      if (!(*step > 0)) throw papdyn::ConfigError("--step must be positive");
      cfg.settings.step = *step;
    }
    if (tol) {
      if (!(*tol > 0)) throw papdyn::ConfigError("--tol must be positive");
      cfg.settings.tol = *tol;
    }
    const papdyn::CommandResult r = papdyn::run_command(cfg, *papdyn::command_from_name(name));

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw papdyn::ConfigError("cannot create output directory " + out_dir + ": " + ec.message());
    const fs::path dir(out_dir);
    write_file(dir / (name + "_report.txt"), r.text);
    write_file(dir / (name + "_report.json"), r.json);
    for (const auto& [file, content] : r.artifacts) write_file(dir / file, content);

    std::cout << r.text;
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "papdyn " << name << ": " << e.what() << "\n";
    return papdyn::exit_code_for(e);
  }
}
