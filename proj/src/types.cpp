#include "mbgdt/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbgdt/error.hpp"

namespace mbgdt {

Dataset::Dataset(std::vector<Sample> samples)
    : samples_(std::move(samples)), contaminated_(samples_.size(), 0) {}

Dataset::Dataset(std::vector<Sample> samples, std::vector<std::uint8_t> contaminated)
    : samples_(std::move(samples)), contaminated_(std::move(contaminated)) {
  if (contaminated_.size() != samples_.size()) {
    throw InvalidInput("contamination flags do not match sample count");
  }
}

void Dataset::add(Sample s, bool contaminated) {
  samples_.push_back(s);
  contaminated_.push_back(contaminated ? 1 : 0);
}

void Dataset::reserve(std::size_t n) {
  samples_.reserve(n);
  contaminated_.reserve(n);
}

std::size_t Dataset::contaminated_count() const {
  return static_cast<std::size_t>(std::count(contaminated_.begin(), contaminated_.end(), 1));
}

std::vector<double> featurize(double x, std::size_t degree) {
  std::vector<double> out(degree + 1);
  featurize_into(x, out);
  return out;
}

void featurize_into(double x, std::span<double> out) noexcept {
  double p = 1.0;
  for (double& v : out) {
    v = p;
    p *= x;
  }
}

double predict(const WeightVector& w, double x) noexcept {
  double sum = 0.0;
  double p = 1.0;
  for (double c : w.coeffs) {
    sum += c * p;
    p *= x;
  }
  return sum;
}

std::pair<Dataset, ScaleParams> scale_x(const Dataset& dataset) {
  if (dataset.empty()) throw InvalidInput("scale_x: empty dataset");
  auto [lo, hi] = std::minmax_element(dataset.samples().begin(), dataset.samples().end(),
                                      [](const Sample& a, const Sample& b) { return a.x < b.x; });
  if (!(hi->x > lo->x)) {
    throw InvalidInput("scale_x: degenerate x-range (all x equal), cannot fit");
  }
  ScaleParams scale{0.5 * (lo->x + hi->x), 0.5 * (hi->x - lo->x)};
  return {apply_scale(dataset, scale), scale};
}

Dataset apply_scale(const Dataset& dataset, const ScaleParams& scale) {
  Dataset out = dataset;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].x = scale.apply(out[i].x);
  return out;
}

void require_finite(const Dataset& dataset, const char* what) {
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!std::isfinite(dataset[i].x) || !std::isfinite(dataset[i].y)) {
      throw InvalidInput(std::string(what) + ": sample " + std::to_string(i) +
                         " has a non-finite coordinate");
    }
  }
}

}  // namespace mbgdt
