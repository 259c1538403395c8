#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "mbgdt/error.hpp"
#include "mbgdt/experiment.hpp"

namespace mbgdt {

namespace {

struct KeyDefault {
  std::string_view key;
  std::string_view value;
};

// Keep in sync with config/defaults.conf (a unit test compares the two).
constexpr std::array<KeyDefault, 39> kDefaults{{
    {"seed", "0"},
    {"trials", "50"},
    {"out", "mbgdt_out"},
    {"n_train", "200"},
    {"n_test", "500"},
    {"curve.coeffs", "0,2,0,-3,0,1.5,0,-0.5,0,0.2"},
    {"curve.x_min", "-1"},
    {"curve.x_max", "1"},
    {"curve.noise_sigma", "0.1"},
    {"contamination.family", "none"},
    {"contamination.epsilon", "0"},
    {"contamination.offset_x_ratio", "0"},
    {"contamination.offset_y_ratio", "auto"},
    {"contamination.spread", "0.05"},
    {"nonuniform.case", "none"},
    {"nonuniform.region_lo", "-0.2"},
    {"nonuniform.region_hi", "auto"},
    {"nonuniform.dense_fraction", "0.6"},
    {"nonuniform.gap_fraction", "0.1"},
    {"model.degree", "5"},
    {"model.batch_size", "32"},
    {"model.learning_rate", "0.05"},
    {"model.max_iter", "20000"},
    {"model.convergence_tol", "1e-6"},
    {"model.convergence_patience", "5"},
    {"model.trim_fraction", "auto"},
    {"model.huber_delta", "0.3"},
    {"model.loss", "huber"},
    {"model.scale_x", "true"},
    {"kernel.enabled", "false"},
    {"kernel.width_fraction_x", "0.1"},
    {"kernel.width_fraction_y", "0.1"},
    {"kernel.stride_fraction", "0.5"},
    {"kernel.threshold_fraction", "0.1"},
    {"kernel.strict", "false"},
    {"dbscan.enabled", "false"},
    {"dbscan.radius", "0.05"},
    {"dbscan.min_samples", "8"},
    {"dbscan.min_clusters_to_act", "2"},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError("config key '" + std::string(key) + "': expected a real number, got '" +
                      std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config key '" + std::string(key) +
                      "': expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected true or false, got '" +
                    std::string(text) + "'");
}

}  // namespace

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_real("list", item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ExperimentConfig::ExperimentConfig() {
  entries_.reserve(kDefaults.size());
  for (const auto& d : kDefaults) entries_.emplace_back(d.key, d.value);
}

bool ExperimentConfig::is_known_key(std::string_view key) noexcept {
  return std::any_of(kDefaults.begin(), kDefaults.end(),
                     [&](const KeyDefault& d) { return d.key == key; });
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  const std::string_view k = trim(key);
  for (auto& [name, v] : entries_) {
    if (name == k) {
      v = std::string(trim(value));
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(k) + "'");
}

void ExperimentConfig::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void ExperimentConfig::parse(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      set_assignment(line);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void ExperimentConfig::load_file(const std::filesystem::path& path) {
  parse(read_text_file(path), path.string());
}

const std::string& ExperimentConfig::get(std::string_view key) const {
  for (const auto& [name, v] : entries_) {
    if (name == key) return v;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

namespace {

// Shortest text that parses back to the same double.
std::string shortest_real(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : format_real(v);
}

}  // namespace

std::string ExperimentConfig::header() const {
  // The output location is not part of the experiment, so identical runs
  // written to different places stay byte-identical. "auto" is echoed as the
  // value it resolved to.
  const ResolvedExperiment r = resolve();
  std::string out;
  for (const auto& [k, v] : entries_) {
    if (k == "out") continue;
    std::string shown = v;
    if (trim(v) == "auto") {
      if (k == "model.trim_fraction") shown = shortest_real(r.scenario.trimmed_config().trim_fraction);
      if (k == "contamination.offset_y_ratio") {
        shown = shortest_real(r.scenario.contamination.offset_y_ratio);
      }
      if (k == "nonuniform.region_hi" && r.scenario.nonuniform) {
        shown = shortest_real(r.scenario.nonuniform->effective_region(r.scenario.curve).second);
      }
    }
    out += "# " + k + "=" + shown + "\n";
  }
  return out;
}

ResolvedExperiment ExperimentConfig::resolve() const {
  const auto real = [&](std::string_view k) { return parse_real(k, get(k)); };
  const auto count = [&](std::string_view k) {
    return static_cast<std::size_t>(parse_unsigned(k, get(k)));
  };
  const auto flag = [&](std::string_view k) { return parse_bool(k, get(k)); };

  ResolvedExperiment r;
  r.seed = parse_unsigned("seed", get("seed"));
  r.trials = count("trials");
  if (r.trials == 0) throw ConfigError("config key 'trials': must be positive");
  r.out = get("out");

  Scenario& s = r.scenario;
  s.n_train = count("n_train");
  s.n_test = count("n_test");
  if (s.n_train == 0 || s.n_test == 0) throw ConfigError("n_train and n_test must be positive");

  try {
    s.curve.coeffs = parse_real_list(get("curve.coeffs"));
  } catch (const ConfigError&) {
    throw ConfigError("config key 'curve.coeffs': expected comma-separated reals, got '" +
                      get("curve.coeffs") + "'");
  }
  s.curve.x_min = real("curve.x_min");
  s.curve.x_max = real("curve.x_max");
  s.curve.noise_sigma = real("curve.noise_sigma");

  const auto family = parse_contamination_family(get("contamination.family"));
  if (!family) {
    throw ConfigError("config key 'contamination.family': unknown family '" +
                      get("contamination.family") +
                      "' (none, random, parallel-line, edge-corner, begin, middle, end)");
  }
  s.contamination.family = *family;
  s.contamination.epsilon = real("contamination.epsilon");
  s.contamination.offset_x_ratio = real("contamination.offset_x_ratio");
  s.contamination.offset_y_ratio = get("contamination.offset_y_ratio") == "auto"
                                       ? default_offset_y_ratio(*family)
                                       : real("contamination.offset_y_ratio");
  s.contamination.spread = real("contamination.spread");

  const std::string& nu = get("nonuniform.case");
  if (nu != "none") {
    const auto c = parse_nonuniform_case(nu);
    if (!c) {
      throw ConfigError("config key 'nonuniform.case': unknown case '" + nu +
                        "' (none, dense, incomplete)");
    }
    NonUniformSpec spec;
    spec.kind = *c;
    spec.region_lo = real("nonuniform.region_lo");
    if (trim(get("nonuniform.region_hi")) != "auto") spec.region_hi = real("nonuniform.region_hi");
    spec.dense_fraction = real("nonuniform.dense_fraction");
    spec.gap_fraction = real("nonuniform.gap_fraction");
    s.nonuniform = spec;
  }

  ModelConfig& m = s.model;
  m.model_degree = count("model.degree");
  m.batch_size = count("model.batch_size");
  m.learning_rate = real("model.learning_rate");
  m.max_iter = count("model.max_iter");
  m.convergence_tol = real("model.convergence_tol");
  m.convergence_patience = count("model.convergence_patience");
  m.huber_delta = real("model.huber_delta");
  const std::string& loss = get("model.loss");
  if (loss == "huber") {
    m.loss_kind = LossKind::Huber;
  } else if (loss == "squared") {
    m.loss_kind = LossKind::Squared;
  } else {
    throw ConfigError("config key 'model.loss': expected huber or squared, got '" + loss + "'");
  }
  m.scale_x = flag("model.scale_x");
  if (get("model.trim_fraction") != "auto") s.trim_fraction = real("model.trim_fraction");

  // Parsed and checked even when disabled so a bad value never lies dormant.
  KernelSettings k;
  k.width_fraction_x = real("kernel.width_fraction_x");
  k.width_fraction_y = real("kernel.width_fraction_y");
  k.stride_fraction = real("kernel.stride_fraction");
  k.threshold_fraction = real("kernel.threshold_fraction");
  k.strict_mode = flag("kernel.strict");
  DbscanConfig d;
  d.radius = real("dbscan.radius");
  d.min_samples = count("dbscan.min_samples");
  d.min_clusters_to_act = count("dbscan.min_clusters_to_act");

  // Surface range errors as configuration errors, not mid-run failures.
  try {
    s.curve.validate();
    s.contamination.validate();
    if (s.nonuniform) s.nonuniform->validate(s.curve);
    s.trimmed_config().validate();
    if (s.model.batch_size > s.n_train) {
      throw InvalidInput("model.batch_size exceeds n_train");
    }
    d.validate();
    if (!(k.width_fraction_x > 0 && k.width_fraction_y > 0 && k.stride_fraction > 0 &&
          k.stride_fraction <= 1 && k.threshold_fraction > 0 && k.threshold_fraction <= 1)) {
      throw InvalidInput("kernel fractions out of range");
    }
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  if (flag("kernel.enabled")) s.kernel = k;
  if (flag("dbscan.enabled")) s.dbscan = d;
  return r;
}

}  // namespace mbgdt
