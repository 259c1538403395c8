#ifndef MBGDT_TYPES_HPP_
#define MBGDT_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mbgdt {

struct Sample {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Ordered collection of samples. Positions are the canonical sample identity
/// used by batching and trimming. Each sample carries a contamination flag that
/// generators set for diagnostics; fitting ignores it.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Sample> samples);
  Dataset(std::vector<Sample> samples, std::vector<std::uint8_t> contaminated);

  void add(Sample s, bool contaminated = false);
  void reserve(std::size_t n);

  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  Sample& operator[](std::size_t i) { return samples_[i]; }

  std::span<const Sample> samples() const noexcept { return samples_; }

  bool is_contaminated(std::size_t i) const { return contaminated_[i] != 0; }
  void set_contaminated(std::size_t i, bool value) { contaminated_[i] = value ? 1 : 0; }
  std::size_t contaminated_count() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Sample> samples_;
  std::vector<std::uint8_t> contaminated_;
};

/// Polynomial coefficients in the monomial basis; coeffs[k] multiplies x^k.
struct WeightVector {
  std::vector<double> coeffs;

  WeightVector() = default;
  explicit WeightVector(std::vector<double> c) : coeffs(std::move(c)) {}
  static WeightVector zeros(std::size_t degree) {
    return WeightVector(std::vector<double>(degree + 1, 0.0));
  }

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  std::size_t size() const noexcept { return coeffs.size(); }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

/// Affine map x -> (x - center) / half_width taking the training x-range onto
/// [-1, 1].
struct ScaleParams {
  double center = 0.0;
  double half_width = 1.0;

  double apply(double x) const noexcept { return (x - center) / half_width; }
  double invert(double scaled) const noexcept { return scaled * half_width + center; }

  static ScaleParams identity() noexcept { return {}; }

  friend bool operator==(const ScaleParams&, const ScaleParams&) = default;
};

/// Returns [1, x, x^2, ..., x^degree]; entry k is the k-fold product of x.
std::vector<double> featurize(double x, std::size_t degree);

/// Writes the features of x into out; out.size() - 1 is the degree.
void featurize_into(double x, std::span<double> out) noexcept;

/// Dot product of w.coeffs with featurize(x, w.degree()).
double predict(const WeightVector& w, double x) noexcept;

/// Min-max scales x onto [-1, 1]. Throws InvalidInput on an empty dataset or a
/// degenerate x-range.
std::pair<Dataset, ScaleParams> scale_x(const Dataset& dataset);

/// Applies an existing map to every x; y and flags are untouched.
Dataset apply_scale(const Dataset& dataset, const ScaleParams& scale);

/// Throws InvalidInput if any sample has a non-finite coordinate.
void require_finite(const Dataset& dataset, const char* what);

}  // namespace mbgdt

#endif  // MBGDT_TYPES_HPP_
