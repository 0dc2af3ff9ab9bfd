// bkgr: experiment driver. Precedence: flags > config file > defaults.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bkgr/cli.hpp"
#include "bkgr/errors.hpp"

namespace {

const std::vector<std::pair<std::string, std::string>> kKeys = {
    {"p", "residue characteristic"},
    {"k", "F_q = F_{p^k} when --q is absent"},
    {"e", "ramification index"},
    {"f", "number of embeddings"},
    {"h", "height"},
    {"d", "rank"},
    {"mu", "coweight entries, 3 per embedding (comma separated)"},
    {"c", "c(u) coefficients over F_p (comma separated)"},
    {"q", "field sizes (comma separated)"},
    {"budget", "max enumerated tuples"},
    {"seed", "64-bit seed"},
    {"shards", "shard count"},
    {"threads", "worker pool size (0 = OpenMP default)"},
    {"samples", "samples for randomized experiments (0 = default)"},
    {"emax", "largest e for claim-verify"},
    {"n", "rank for chars-span and orbit-count"},
    {"rsmax", "largest r + s for dimpoly-oracle"},
    {"output", "JSON report path (stdout when absent)"},
    {"csv", "CSV mirror path"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bkgr experiment driver"};
  app.set_version_flag("--version", std::string(bkgr::kVersion));
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h would clash with --h

  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::string> config_path;
  for (const auto& name : bkgr::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path[name], "key = value config file");
    for (const auto& [key, help] : kKeys) {
      sub->add_option(key == "output" ? "-o,--output" : "--" + key, flags[name][key], help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    bkgr::ExperimentConfig cfg;
    cfg.experiment = name;
    if (!config_path[name].empty())
      for (const auto& [k, v] : bkgr::read_config_file(config_path[name])) {
        if (k == "experiment") continue;
        cfg.set(k, v);
      }
    for (const auto& [key, help] : kKeys)
      if (sub->get_option("--" + key)->count() > 0) cfg.set(key, flags[name][key]);
    const bkgr::Report r = bkgr::run(cfg);
    return bkgr::write_report(r, cfg);
  } catch (const bkgr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bkgr::PreconditionFailed& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
