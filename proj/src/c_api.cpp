#include "mbgdt/mbgdt.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "mbgdt/error.hpp"
#include "mbgdt/experiment.hpp"

struct mbgdt_config {
  mbgdt::ExperimentConfig impl;
};
struct mbgdt_dataset {
  mbgdt::Dataset impl;
};
struct mbgdt_fit {
  mbgdt::FitResult impl;
};
struct mbgdt_sweep {
  mbgdt::SweepTable impl;
};
struct mbgdt_report {
  mbgdt::ReproduceReport impl;
};

namespace {

thread_local std::string tl_error;

mbgdt_status fail(mbgdt_status status, const char* msg) {
  tl_error = msg;
  return status;
}

// Maps the library's exception hierarchy onto status codes.
template <class F>
mbgdt_status guarded(F&& body) noexcept {
  try {
    return body();
  } catch (const mbgdt::ConfigError& e) {
    return fail(MBGDT_ERR_CONFIG, e.what());
  } catch (const mbgdt::DivergenceError& e) {
    return fail(MBGDT_ERR_DIVERGED, e.what());
  } catch (const mbgdt::ExperimentFailed& e) {
    return fail(MBGDT_ERR_DIVERGED, e.what());
  } catch (const mbgdt::IoError& e) {
    return fail(MBGDT_ERR_IO, e.what());
  } catch (const mbgdt::InvalidInput& e) {
    return fail(MBGDT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MBGDT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MBGDT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MBGDT_ERR_INTERNAL, "unknown error");
  }
}

#define MBGDT_REQUIRE(ptr)                                                   \
  do {                                                                       \
    if (!(ptr)) return fail(MBGDT_ERR_INVALID_ARGUMENT, "null pointer: " #ptr); \
  } while (0)

}  // namespace

extern "C" {

const char* mbgdt_last_error(void) { return tl_error.c_str(); }

const char* mbgdt_version(void) { return "1.0.0"; }

mbgdt_status mbgdt_config_create(mbgdt_config** out) {
  MBGDT_REQUIRE(out);
  return guarded([&] {
    *out = new mbgdt_config{};
    return MBGDT_OK;
  });
}

void mbgdt_config_destroy(mbgdt_config* config) { delete config; }

mbgdt_status mbgdt_config_load(mbgdt_config* config, const char* path) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(path);
  return guarded([&] {
    mbgdt::ExperimentConfig copy = config->impl;
    copy.load_file(path);
    config->impl = std::move(copy);
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_config_set(mbgdt_config* config, const char* key, const char* value) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(key);
  MBGDT_REQUIRE(value);
  return guarded([&] {
    config->impl.set(key, value);
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_config_set_assignment(mbgdt_config* config, const char* assignment) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(assignment);
  return guarded([&] {
    config->impl.set_assignment(assignment);
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_config_get(const mbgdt_config* config, const char* key, char* buf, size_t cap,
                              size_t* needed) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(key);
  return guarded([&] {
    const std::string& v = config->impl.get(key);
    if (needed) *needed = v.size() + 1;
    if (buf && cap > v.size()) std::memcpy(buf, v.c_str(), v.size() + 1);
    else if (buf) return fail(MBGDT_ERR_INVALID_ARGUMENT, "buffer too small");
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_config_validate(const mbgdt_config* config) {
  MBGDT_REQUIRE(config);
  return guarded([&] {
    (void)config->impl.resolve();
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_generate(const mbgdt_config* config, mbgdt_dataset** train,
                            mbgdt_dataset** test) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(train);
  MBGDT_REQUIRE(test);
  return guarded([&] {
    const mbgdt::ResolvedExperiment r = config->impl.resolve();
    mbgdt::TrialData data = mbgdt::make_trial_data(r.scenario, r.seed);
    auto* tr = new mbgdt_dataset{std::move(data.train)};
    auto* te = new (std::nothrow) mbgdt_dataset{std::move(data.test)};
    if (!te) {
      delete tr;
      throw std::bad_alloc();
    }
    *train = tr;
    *test = te;
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_dataset_create(const double* x, const double* y, size_t n, mbgdt_dataset** out) {
  MBGDT_REQUIRE(out);
  if (n > 0) {
    MBGDT_REQUIRE(x);
    MBGDT_REQUIRE(y);
  }
  return guarded([&] {
    mbgdt::Dataset d;
    d.reserve(n);
    for (size_t i = 0; i < n; ++i) d.add({x[i], y[i]});
    *out = new mbgdt_dataset{std::move(d)};
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_dataset_read_csv(const char* path, mbgdt_dataset** out) {
  MBGDT_REQUIRE(path);
  MBGDT_REQUIRE(out);
  return guarded([&] {
    *out = new mbgdt_dataset{mbgdt::read_dataset_csv(path)};
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_dataset_write_csv(const mbgdt_dataset* dataset, const mbgdt_config* config,
                                     const char* path) {
  MBGDT_REQUIRE(dataset);
  MBGDT_REQUIRE(path);
  return guarded([&] {
    mbgdt::write_dataset_csv(path, dataset->impl, config ? config->impl.header() : std::string());
    return MBGDT_OK;
  });
}

size_t mbgdt_dataset_size(const mbgdt_dataset* dataset) {
  return dataset ? dataset->impl.size() : 0;
}

mbgdt_status mbgdt_dataset_get(const mbgdt_dataset* dataset, size_t index, double* x, double* y,
                               int* is_contaminated) {
  MBGDT_REQUIRE(dataset);
  if (index >= dataset->impl.size()) return fail(MBGDT_ERR_INVALID_ARGUMENT, "index out of range");
  if (x) *x = dataset->impl[index].x;
  if (y) *y = dataset->impl[index].y;
  if (is_contaminated) *is_contaminated = dataset->impl.is_contaminated(index) ? 1 : 0;
  return MBGDT_OK;
}

void mbgdt_dataset_destroy(mbgdt_dataset* dataset) { delete dataset; }

mbgdt_status mbgdt_fit_dataset(const mbgdt_config* config, const mbgdt_dataset* train,
                               mbgdt_fit** out) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(train);
  MBGDT_REQUIRE(out);
  return guarded([&] {
    const mbgdt::ResolvedExperiment r = config->impl.resolve();
    mbgdt::ModelConfig model = r.scenario.trimmed_config();
    model.seed = mbgdt::model_seed(r.seed);
    *out = new mbgdt_fit{mbgdt::fit(train->impl, model)};
    return MBGDT_OK;
  });
}

size_t mbgdt_fit_coeff_count(const mbgdt_fit* fit) { return fit ? fit->impl.weights.size() : 0; }

mbgdt_status mbgdt_fit_coeffs(const mbgdt_fit* fit, double* out, size_t cap) {
  MBGDT_REQUIRE(fit);
  MBGDT_REQUIRE(out);
  const auto& c = fit->impl.weights.coeffs;
  if (cap < c.size()) return fail(MBGDT_ERR_INVALID_ARGUMENT, "buffer too small");
  std::copy(c.begin(), c.end(), out);
  return MBGDT_OK;
}

size_t mbgdt_fit_iterations(const mbgdt_fit* fit) {
  return fit ? fit->impl.trace.iterations_run : 0;
}

int mbgdt_fit_converged(const mbgdt_fit* fit) { return fit && fit->impl.trace.converged ? 1 : 0; }

mbgdt_status mbgdt_fit_predict(const mbgdt_fit* fit, double x, double* out) {
  MBGDT_REQUIRE(fit);
  MBGDT_REQUIRE(out);
  *out = mbgdt::predict(fit->impl.weights, fit->impl.scale.apply(x));
  return MBGDT_OK;
}

mbgdt_status mbgdt_fit_mse(const mbgdt_fit* fit, const mbgdt_dataset* test, double* out) {
  MBGDT_REQUIRE(fit);
  MBGDT_REQUIRE(test);
  MBGDT_REQUIRE(out);
  return guarded([&] {
    *out = mbgdt::mse(fit->impl.weights, fit->impl.scale, test->impl);
    return MBGDT_OK;
  });
}

void mbgdt_fit_destroy(mbgdt_fit* fit) { delete fit; }

mbgdt_status mbgdt_cmd_generate(const mbgdt_config* config, const char* out_dir) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(out_dir);
  return guarded([&] {
    mbgdt::cmd_generate(config->impl, out_dir);
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_cmd_fit(const mbgdt_config* config, const char* train_path, const char* out_dir) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(out_dir);
  return guarded([&] {
    std::optional<std::filesystem::path> train;
    if (train_path) train = train_path;
    mbgdt::cmd_fit(config->impl, train, out_dir);
    return MBGDT_OK;
  });
}

mbgdt_status mbgdt_cmd_sweep(const mbgdt_config* config, const char* param, const double* grid,
                             size_t grid_len, const char* out_path, unsigned threads,
                             mbgdt_sweep** out) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(param);
  MBGDT_REQUIRE(out_path);
  if (grid_len > 0) MBGDT_REQUIRE(grid);
  return guarded([&] {
    const auto p = mbgdt::parse_sweep_param(param);
    if (!p) {
      return fail(MBGDT_ERR_CONFIG, ("unknown sweep parameter '" + std::string(param) +
                                     "' (epsilon, distance-x, distance-y)").c_str());
    }
    if (grid_len == 0) return fail(MBGDT_ERR_CONFIG, "sweep grid is empty");
    for (size_t i = 1; i < grid_len; ++i) {
      if (grid[i] < grid[i - 1]) return fail(MBGDT_ERR_CONFIG, "sweep grid must be ascending");
    }
    mbgdt::SweepTable t = mbgdt::cmd_sweep(config->impl, *p, {grid, grid_len}, out_path, threads);
    if (out) *out = new mbgdt_sweep{std::move(t)};
    return MBGDT_OK;
  });
}

size_t mbgdt_sweep_row_count(const mbgdt_sweep* sweep) { return sweep ? sweep->impl.rows.size() : 0; }

mbgdt_status mbgdt_sweep_row(const mbgdt_sweep* sweep, size_t row, double* value,
                             double* mse_naive_mean, double* mse_trimmed_mean, size_t* trials,
                             size_t* errors) {
  MBGDT_REQUIRE(sweep);
  if (row >= sweep->impl.rows.size()) return fail(MBGDT_ERR_INVALID_ARGUMENT, "row out of range");
  const mbgdt::SweepRow& r = sweep->impl.rows[row];
  if (value) *value = r.value;
  if (mse_naive_mean) *mse_naive_mean = r.summary.naive.mean;
  if (mse_trimmed_mean) *mse_trimmed_mean = r.summary.trimmed.mean;
  if (trials) *trials = r.summary.trials;
  if (errors) *errors = r.summary.errors;
  return MBGDT_OK;
}

void mbgdt_sweep_destroy(mbgdt_sweep* sweep) { delete sweep; }

mbgdt_status mbgdt_cmd_reproduce(const mbgdt_config* config, const char* out_dir, unsigned threads,
                                 mbgdt_progress_fn progress, void* user, mbgdt_report** out) {
  MBGDT_REQUIRE(config);
  MBGDT_REQUIRE(out_dir);
  return guarded([&] {
    (void)config->impl.resolve();
    mbgdt::ReproduceProgress on_done;
    if (progress) {
      on_done = [&](std::string_view name, double seconds) {
        progress(std::string(name).c_str(), seconds, user);
      };
    }
    mbgdt::ReproduceReport report = mbgdt::run_reproduction(config->impl, threads, on_done);
    mbgdt::write_reproduction(report, config->impl, out_dir);
    std::string failed;
    for (const auto& e : report.experiments) {
      if (!e.run) failed += (failed.empty() ? "" : ", ") + e.name + " (" + e.error + ")";
    }
    for (const auto& s : report.sweeps) {
      if (!s.table) failed += (failed.empty() ? "" : ", ") + s.name + " (" + s.error + ")";
    }
    if (out) *out = new mbgdt_report{std::move(report)};
    if (!failed.empty()) return fail(MBGDT_ERR_DIVERGED, ("experiments failed: " + failed).c_str());
    return MBGDT_OK;
  });
}

size_t mbgdt_report_summary_count(const mbgdt_report* report) {
  return report ? report->impl.summary.size() : 0;
}

mbgdt_status mbgdt_report_summary_row(const mbgdt_report* report, size_t row,
                                      const char** experiment, double* mse_naive_mean,
                                      double* mse_trimmed_mean, double* ratio) {
  MBGDT_REQUIRE(report);
  if (row >= report->impl.summary.size()) {
    return fail(MBGDT_ERR_INVALID_ARGUMENT, "row out of range");
  }
  const mbgdt::SummaryRow& r = report->impl.summary[row];
  if (experiment) *experiment = r.experiment.c_str();
  if (mse_naive_mean) *mse_naive_mean = r.mse_naive_mean;
  if (mse_trimmed_mean) *mse_trimmed_mean = r.mse_trimmed_mean;
  if (ratio) *ratio = r.ratio;
  return MBGDT_OK;
}

void mbgdt_report_destroy(mbgdt_report* report) { delete report; }

}  // extern "C"
