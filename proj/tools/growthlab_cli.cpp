// Command-line front end. Talks to the library only through growthlab.h.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "growthlab/growthlab.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream os;
  os << in.rdbuf();
  text = os.str();
  return true;
}

int report(gl_status status, char* text, int all_pass) {
  if (status != GL_OK) {
    std::cerr << "growthlab: " << gl_status_name(status) << ": " << gl_last_error() << '\n';
    return status == GL_RESOURCE || status == GL_CONFIG || status == GL_INVALID_ARGUMENT ? kExitUsage : kExitFail;
  }
  if (text) std::cout << text;
  gl_string_free(text);
  return all_pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic lattice growth-model laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::uint64_t seed = 0;
  int verbosity = 0;

  auto* run = app.add_subcommand("run", "Run a convergence experiment from a config file");
  run->add_option("--config", config_path, "Experiment config")->required();
  run->add_option("--out", out_dir, "Output directory for CSV and JSON");
  run->add_option("--seed", seed, "Random seed");
  run->add_flag("-v,--verbose", verbosity, "More detail");

  auto* cons = app.add_subcommand("consistency", "Run consistency-ratio sweeps from a config file");
  cons->add_option("--config", config_path, "Consistency config")->required();
  cons->add_option("--out", out_dir, "Output directory");
  cons->add_option("--seed", seed, "Random seed");
  cons->add_flag("-v,--verbose", verbosity, "Show every sweep");

  auto* props = app.add_subcommand("properties", "Run every property suite");
  props->add_option("--seed", seed, "Random seed");

  auto* list = app.add_subcommand("list", "List registered drivers, operators and initial data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (*run || *cons) {
    std::string text;
    if (!read_file(config_path, text)) {
      std::cerr << "growthlab: cannot read config " << config_path << '\n';
      return kExitUsage;
    }
    char* summary = nullptr;
    int pass = 0;
    const gl_status s = *run ? gl_run_config(text.c_str(), out_dir.c_str(), seed, verbosity, &summary, &pass)
                             : gl_consistency_config(text.c_str(), out_dir.c_str(), seed, verbosity, &summary, &pass);
    return report(s, summary, pass);
  }
  if (*props) {
    char* table = nullptr;
    int pass = 0;
    const gl_status s = gl_properties(seed, &table, &pass);
    return report(s, table, pass);
  }
  if (*list) {
    char* text = nullptr;
    const gl_status s = gl_list(&text);
    return report(s, text, 1);
  }
  return kExitUsage;
}
