#include "mbgdt/datagen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "mbgdt/error.hpp"

namespace mbgdt {

double TrueCurve::eval(double x) const noexcept {
  return predict(WeightVector(coeffs), x);
}

void TrueCurve::validate() const {
  if (coeffs.empty()) throw InvalidInput("true curve needs at least one coefficient");
  if (!(x_max > x_min)) throw InvalidInput("true curve domain needs x_max > x_min");
  if (!(noise_sigma >= 0.0)) throw InvalidInput("noise_sigma must be non-negative");
}

namespace {

constexpr std::array<std::pair<ContaminationFamily, std::string_view>, 7> kFamilyNames{{
    {ContaminationFamily::None, "none"},
    {ContaminationFamily::Random, "random"},
    {ContaminationFamily::ParallelLine, "parallel-line"},
    {ContaminationFamily::EdgeCorner, "edge-corner"},
    {ContaminationFamily::Begin, "begin"},
    {ContaminationFamily::Middle, "middle"},
    {ContaminationFamily::End, "end"},
}};

}  // namespace

std::string_view to_string(ContaminationFamily family) noexcept {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "none";
}

std::optional<ContaminationFamily> parse_contamination_family(std::string_view name) noexcept {
  for (const auto& [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  return std::nullopt;
}

std::string_view to_string(NonUniformCase c) noexcept {
  return c == NonUniformCase::DenseRegion ? "dense" : "incomplete";
}

std::optional<NonUniformCase> parse_nonuniform_case(std::string_view name) noexcept {
  if (name == "dense") return NonUniformCase::DenseRegion;
  if (name == "incomplete") return NonUniformCase::IncompleteRegion;
  return std::nullopt;
}

void ContaminationSpec::validate() const {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw InvalidInput("epsilon must lie in [0, 0.5)");
  if (!std::isfinite(offset_x_ratio) || !std::isfinite(offset_y_ratio)) {
    throw InvalidInput("contamination offsets must be finite");
  }
  if (!(spread >= 0.0)) throw InvalidInput("spread must be non-negative");
}

std::pair<double, double> NonUniformSpec::effective_region(const TrueCurve& curve) const {
  if (region_hi) return {region_lo, *region_hi};
  const double width = kind == NonUniformCase::DenseRegion ? 0.25 : gap_fraction;
  return {region_lo, std::min(curve.x_max, region_lo + width * curve.length())};
}

void NonUniformSpec::validate(const TrueCurve& curve) const {
  const auto [lo, hi] = effective_region(curve);
  if (!(lo >= curve.x_min && hi <= curve.x_max && lo < hi)) {
    throw InvalidInput("non-uniform region must be a non-empty interval inside the domain");
  }
  if (kind == NonUniformCase::DenseRegion && !(dense_fraction >= 0.0 && dense_fraction <= 1.0)) {
    throw InvalidInput("dense_fraction must lie in [0, 1]");
  }
  if (kind == NonUniformCase::IncompleteRegion &&
      !(gap_fraction > 0.0 && gap_fraction < 1.0)) {
    throw InvalidInput("gap_fraction must lie in (0, 1)");
  }
}

double default_offset_y_ratio(ContaminationFamily family) noexcept {
  switch (family) {
    case ContaminationFamily::ParallelLine:
    case ContaminationFamily::Begin:
    case ContaminationFamily::Middle:
    case ContaminationFamily::End:
      return 3.0;
    default:
      return 1.0;
  }
}

std::size_t contamination_count(double epsilon, std::size_t n) noexcept {
  return static_cast<std::size_t>(std::llround(epsilon * static_cast<double>(n)));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Dataset gen_true(std::size_t n, const TrueCurve& curve, Rng& rng) {
  curve.validate();
  std::uniform_real_distribution<double> ux(curve.x_min, curve.x_max);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ux(rng);
    double y = curve.eval(x);
    if (curve.noise_sigma > 0.0) y += curve.noise_sigma * noise(rng);
    out.add({x, y});
  }
  return out;
}

Dataset gen_test(std::size_t n, const TrueCurve& curve, Rng& rng) {
  TrueCurve clean = curve;
  clean.noise_sigma = 0.0;
  return gen_true(n, clean, rng);
}

namespace {

double uniform(Rng& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

Dataset contaminate(const Dataset& clean, const ContaminationSpec& spec, const TrueCurve& curve,
                    Rng& rng) {
  if (clean.empty()) throw InvalidInput("contaminate: empty dataset");
  spec.validate();
  curve.validate();
  const std::size_t n = clean.size();
  const std::size_t m =
      spec.family == ContaminationFamily::None ? 0 : contamination_count(spec.epsilon, n);
  if (m >= n) throw InvalidInput("contaminate: contamination count must be below dataset size");
  if (m == 0) return clean;

  double y_min = clean[0].y;
  double y_max = clean[0].y;
  for (const Sample& s : clean.samples()) {
    y_min = std::min(y_min, s.y);
    y_max = std::max(y_max, s.y);
  }
  const double y_range = y_max > y_min ? y_max - y_min : 1.0;

  std::vector<std::size_t> chosen;
  switch (spec.family) {
    case ContaminationFamily::Begin:
    case ContaminationFamily::Middle:
    case ContaminationFamily::End: {
      std::vector<std::size_t> by_x(n);
      std::iota(by_x.begin(), by_x.end(), std::size_t{0});
      std::stable_sort(by_x.begin(), by_x.end(),
                       [&](std::size_t a, std::size_t b) { return clean[a].x < clean[b].x; });
      std::size_t start = 0;
      if (spec.family == ContaminationFamily::Middle) start = (n - m) / 2;
      if (spec.family == ContaminationFamily::End) start = n - m;
      chosen.assign(by_x.begin() + static_cast<std::ptrdiff_t>(start),
                    by_x.begin() + static_cast<std::ptrdiff_t>(start + m));
      break;
    }
    default:
      chosen = select_batch(rng, n, m);
      break;
  }

  Dataset out = clean;
  std::normal_distribution<double> blob(0.0, 1.0);
  const double blob_std = spec.spread * y_range;
  const double corner_x = curve.x_max + spec.offset_x_ratio * curve.length();
  const double corner_y = y_min - spec.offset_y_ratio * y_range;
  const double shift = spec.offset_y_ratio * y_range;
  for (std::size_t i : chosen) {
    Sample& s = out[i];
    switch (spec.family) {
      case ContaminationFamily::Random:
        s.x = uniform(rng, curve.x_min, curve.x_max);
        s.y = uniform(rng, y_min, y_max);
        break;
      case ContaminationFamily::ParallelLine:
        s.y = curve.eval(s.x) + shift;
        break;
      case ContaminationFamily::EdgeCorner:
        s.x = corner_x + blob_std * blob(rng);
        s.y = corner_y + blob_std * blob(rng);
        break;
      case ContaminationFamily::Begin:
      case ContaminationFamily::Middle:
      case ContaminationFamily::End:
        s.y += shift;
        break;
      case ContaminationFamily::None:
        break;
    }
    out.set_contaminated(i, true);
  }
  return out;
}

Dataset gen_nonuniform(std::size_t n, const TrueCurve& curve, const NonUniformSpec& spec,
                       Rng& rng) {
  curve.validate();
  spec.validate(curve);
  const auto [lo, hi] = spec.effective_region(curve);
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto observe = [&](double x) {
    double y = curve.eval(x);
    if (curve.noise_sigma > 0.0) y += curve.noise_sigma * noise(rng);
    return Sample{x, y};
  };

  Dataset out;
  out.reserve(n);
  if (spec.kind == NonUniformCase::DenseRegion) {
    const auto dense = static_cast<std::size_t>(
        std::ceil(spec.dense_fraction * static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
      const double x = i < dense ? uniform(rng, lo, hi) : uniform(rng, curve.x_min, curve.x_max);
      out.add(observe(x));
    }
    return out;
  }

  // Draw on the domain with [lo, hi] cut out, then splice the gap back in.
  const double gap = hi - lo;
  for (std::size_t i = 0; i < n; ++i) {
    double x = uniform(rng, curve.x_min, curve.x_max - gap);
    if (x >= lo) {
      x += gap;
      if (x <= hi) x = std::nextafter(hi, curve.x_max);
    }
    out.add(observe(x));
  }
  return out;
}

}  // namespace mbgdt
