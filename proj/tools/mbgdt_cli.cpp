// Command-line front end. Talks to the library only through the C API.

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mbgdt/mbgdt.h"

namespace {

constexpr int kExitConfig = 2;

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string param;
  std::vector<double> grid;
  std::string train;
};

int report(mbgdt_status status) {
  if (status != MBGDT_OK) std::fprintf(stderr, "mbgdt: error: %s\n", mbgdt_last_error());
  return static_cast<int>(status);
}

// MBGDT_THREADS: unset or 0 runs trials sequentially.
bool read_thread_cap(unsigned& threads) {
  threads = 0;
  const char* env = std::getenv("MBGDT_THREADS");
  if (!env || !*env) return true;
  char* end = nullptr;
  errno = 0;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (errno != 0 || *end != '\0' || env[0] == '-' || v > 4096) {
    std::fprintf(stderr, "mbgdt: error: MBGDT_THREADS must be a non-negative integer, got '%s'\n",
                 env);
    return false;
  }
  threads = static_cast<unsigned>(v);
  return true;
}

std::string config_value(const mbgdt_config* cfg, const char* key) {
  size_t needed = 0;
  if (mbgdt_config_get(cfg, key, nullptr, 0, &needed) != MBGDT_OK) return {};
  std::string buf(needed, '\0');
  if (mbgdt_config_get(cfg, key, buf.data(), buf.size(), &needed) != MBGDT_OK) return {};
  buf.resize(needed - 1);
  return buf;
}

std::vector<double> default_grid(const std::string& param) {
  if (param == "epsilon") return {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45};
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

struct ConfigHandle {
  mbgdt_config* ptr = nullptr;
  ~ConfigHandle() { mbgdt_config_destroy(ptr); }
};

// Applies the config file, then --set in order, then the dedicated flags.
mbgdt_status build_config(const Options& opt, const CLI::App& app, ConfigHandle& cfg) {
  mbgdt_status s = mbgdt_config_create(&cfg.ptr);
  if (s != MBGDT_OK) return s;
  if (!opt.config_path.empty() && (s = mbgdt_config_load(cfg.ptr, opt.config_path.c_str())) != MBGDT_OK) {
    return s;
  }
  for (const std::string& a : opt.sets) {
    if ((s = mbgdt_config_set_assignment(cfg.ptr, a.c_str())) != MBGDT_OK) return s;
  }
  if (app.count("--seed") > 0) {
    s = mbgdt_config_set(cfg.ptr, "seed", std::to_string(opt.seed).c_str());
    if (s != MBGDT_OK) return s;
  }
  if (app.count("--trials") > 0) {
    s = mbgdt_config_set(cfg.ptr, "trials", std::to_string(opt.trials).c_str());
    if (s != MBGDT_OK) return s;
  }
  if (app.count("--out") > 0) {
    if ((s = mbgdt_config_set(cfg.ptr, "out", opt.out.c_str())) != MBGDT_OK) return s;
  }
  return mbgdt_config_validate(cfg.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust polynomial regression with trimmed mini-batch gradient descent"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "key=value configuration file");
  app.add_option("--set", opt.sets, "Override a configuration key (key=value); repeatable")
      ->take_all()
      ->allow_extra_args(false);
  app.add_option("--out", opt.out,
                 "Output directory (generate, fit, reproduce) or file (sweep)");
  app.add_option("--seed", opt.seed, "Master seed");
  app.add_option("--trials", opt.trials, "Trials per experiment")->check(CLI::PositiveNumber);

  CLI::App* generate = app.add_subcommand("generate", "Write train.csv and test.csv");
  CLI::App* fit = app.add_subcommand("fit", "Fit the configured model; write weights.txt and trace.csv");
  fit->add_option("--train", opt.train, "Training CSV (default: generate from the config)");
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one contamination parameter");
  sweep->add_option("--param", opt.param, "Swept parameter")
      ->required()
      ->check(CLI::IsMember({"epsilon", "distance-x", "distance-y"}));
  sweep->add_option("--grid", opt.grid, "Comma-separated ascending values")->delimiter(',');
  CLI::App* reproduce = app.add_subcommand("reproduce", "Run the shipped experiment set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  unsigned threads = 0;
  if (!read_thread_cap(threads)) return kExitConfig;

  ConfigHandle cfg;
  if (mbgdt_status s = build_config(opt, app, cfg); s != MBGDT_OK) return report(s);
  const std::string out = config_value(cfg.ptr, "out");

  if (generate->parsed()) return report(mbgdt_cmd_generate(cfg.ptr, out.c_str()));

  if (fit->parsed()) {
    return report(mbgdt_cmd_fit(cfg.ptr, opt.train.empty() ? nullptr : opt.train.c_str(), out.c_str()));
  }

  if (sweep->parsed()) {
    const std::vector<double> grid = opt.grid.empty() ? default_grid(opt.param) : opt.grid;
    const std::string path =
        app.count("--out") > 0 ? out : out + "/sweep_" + opt.param + ".csv";
    return report(mbgdt_cmd_sweep(cfg.ptr, opt.param.c_str(), grid.data(), grid.size(),
                                  path.c_str(), threads, nullptr));
  }

  if (reproduce->parsed()) {
    mbgdt_report* rep = nullptr;
    const auto progress = [](const char* name, double seconds, void*) {
      std::fprintf(stderr, "mbgdt: %s done in %.1f s\n", name, seconds);
    };
    const mbgdt_status s =
        mbgdt_cmd_reproduce(cfg.ptr, out.c_str(), threads, progress, nullptr, &rep);
    for (size_t i = 0; i < mbgdt_report_summary_count(rep); ++i) {
      const char* name = nullptr;
      double naive = 0, trimmed = 0, ratio = 0;
      mbgdt_report_summary_row(rep, i, &name, &naive, &trimmed, &ratio);
      std::printf("%-28s naive=%-12.6g trimmed=%-12.6g ratio=%.4g\n", name, naive, trimmed, ratio);
    }
    mbgdt_report_destroy(rep);
    return report(s);
  }
  return kExitConfig;
}
