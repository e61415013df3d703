// Experiment driver: declarative configs in, CSV/JSON bundles out.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "wt/acceptance.hpp"
#include "wt/experiments.hpp"
#include "wt/systems.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
  std::string output_dir;
  bool no_reproducible = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path, "experiment config file")
      ->required();
  cmd->add_option("-s,--seed", opts.seed, "override the config seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  cmd->add_option("-w,--workers", opts.workers,
                  "worker threads (0 = all cores)");
  cmd->add_option("-o,--output", opts.output_dir, "override output directory");
  cmd->add_flag("--no-reproducible", opts.no_reproducible,
                "disable reproducible mode");
}

int run_kind(const std::string& kind, const CommonOpts& opts) {
  wt::ExperimentConfig cfg;
  try {
    cfg = wt::load_config(opts.config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  if (cfg.kind != kind) {
    std::fprintf(stderr,
                 "error: config kind '%s' does not match subcommand '%s'\n",
                 cfg.kind.c_str(), kind.c_str());
    return 2;
  }
  if (opts.seed_set) cfg.seed = opts.seed;
  if (opts.workers >= 0) cfg.workers = opts.workers;
  if (!opts.output_dir.empty()) cfg.output_dir = opts.output_dir;
  if (opts.no_reproducible) cfg.reproducible = false;

  try {
    const wt::WaveSystem sys = [&] {
      if (cfg.system_kind == "capillary")
        return wt::WaveSystem::capillary(cfg.sigma, cfg.epsilon);
      if (cfg.system_kind == "rossby")
        return wt::WaveSystem::rossby(cfg.beta, cfg.rho, cfg.epsilon);
      if (cfg.system_kind == "gravity")
        return wt::WaveSystem::gravity(cfg.g, cfg.epsilon);
      if (cfg.system_kind == "acoustic")
        return wt::WaveSystem::acoustic(cfg.sound_speed, cfg.coupling_v0,
                                        cfg.epsilon);
      return wt::WaveSystem::nls(cfg.epsilon);
    }();
    for (const std::string& w : wt::system_warnings(sys))
      std::fprintf(stderr, "warning: %s\n", w.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    const wt::RunResult result = wt::run_experiment(cfg);
    for (const wt::Verdict& v : result.verdicts)
      std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", v.name.c_str(),
                  v.detail.c_str());
    for (const std::string& a : result.artifacts)
      std::printf("wrote %s\n", a.c_str());
    return result.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"waveturb: weakly nonlinear wave-turbulence statistics engine"};
  app.require_subcommand(1);

  const char* kinds[] = {"mc-kinetic-3w",  "mc-kinetic-4w",
                         "perturbation-scaling", "onemode-pdf",
                         "pbp-triad",      "kz-flux-scan"};
  std::vector<std::pair<std::string, CommonOpts>> registered;
  registered.reserve(6);
  for (const char* kind : kinds) {
    registered.emplace_back(kind, CommonOpts{});
    CLI::App* cmd = app.add_subcommand(kind, std::string("run the ") + kind +
                                                 " experiment");
    add_common(cmd, registered.back().second);
  }

  int verify_workers = 0;
  int verify_only = 0;
  CLI::App* verify =
      app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("-w,--workers", verify_workers,
                     "worker threads (0 = all cores)");
  verify->add_option("-k,--criterion", verify_only,
                     "run a single criterion (1..11)");

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) {
    std::vector<wt::CriterionResult> results;
    try {
      if (verify_only > 0)
        results.push_back(wt::run_criterion(verify_only, verify_workers));
      else
        results = wt::run_acceptance(verify_workers);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
    bool all = true;
    for (const auto& r : results) {
      std::printf("[%s] criterion %d: %s — %s (%.1fs)\n",
                  r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                  r.detail.c_str(), r.seconds);
      all = all && r.pass;
    }
    return all ? 0 : 1;
  }

  for (auto& [kind, opts] : registered)
    if (app.get_subcommand(kind)->parsed()) return run_kind(kind, opts);
  return 2;
}
