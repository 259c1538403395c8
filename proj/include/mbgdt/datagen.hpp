#ifndef MBGDT_DATAGEN_HPP_
#define MBGDT_DATAGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mbgdt/optimizer.hpp"
#include "mbgdt/types.hpp"

namespace mbgdt {

/// Ground-truth polynomial and observation noise.
struct TrueCurve {
  std::vector<double> coeffs{0.0, 2.0, 0.0, -3.0, 0.0, 1.5, 0.0, -0.5, 0.0, 0.2};
  double x_min = -1.0;
  double x_max = 1.0;
  double noise_sigma = 0.1;

  double eval(double x) const noexcept;
  double length() const noexcept { return x_max - x_min; }
  void validate() const;

  friend bool operator==(const TrueCurve&, const TrueCurve&) = default;
};

enum class ContaminationFamily { None, Random, ParallelLine, EdgeCorner, Begin, Middle, End };

std::string_view to_string(ContaminationFamily family) noexcept;
std::optional<ContaminationFamily> parse_contamination_family(std::string_view name) noexcept;

/// The adversary: `epsilon` of the samples are replaced according to
/// `family`. Offsets are fractions of the x-domain length (x) or of the
/// clean y-range (y); `spread` is the EdgeCorner blob std in clean-y-range
/// units.
struct ContaminationSpec {
  ContaminationFamily family = ContaminationFamily::None;
  double epsilon = 0.0;
  double offset_x_ratio = 0.0;
  double offset_y_ratio = 1.0;
  double spread = 0.05;

  void validate() const;

  friend bool operator==(const ContaminationSpec&, const ContaminationSpec&) = default;
};

enum class NonUniformCase { DenseRegion, IncompleteRegion };

std::string_view to_string(NonUniformCase c) noexcept;
std::optional<NonUniformCase> parse_nonuniform_case(std::string_view name) noexcept;

struct NonUniformSpec {
  NonUniformCase kind = NonUniformCase::DenseRegion;
  double region_lo = -0.2;
  std::optional<double> region_hi;  // unset: sized from the case, see below
  double dense_fraction = 0.6;
  double gap_fraction = 0.1;

  /// [region_lo, region_hi] when region_hi is set. Otherwise the region
  /// starts at region_lo and spans a quarter of the domain (DenseRegion) or
  /// gap_fraction of it (IncompleteRegion), clamped to x_max.
  std::pair<double, double> effective_region(const TrueCurve& curve) const;
  void validate(const TrueCurve& curve) const;

  friend bool operator==(const NonUniformSpec&, const NonUniformSpec&) = default;
};

/// Shipped vertical offset per family: families that displace true samples
/// (ParallelLine, Begin, Middle, End) move them 3 clean y-ranges; EdgeCorner
/// sits 1 y-range below the data.
double default_offset_y_ratio(ContaminationFamily family) noexcept;

/// round(epsilon * n)
std::size_t contamination_count(double epsilon, std::size_t n) noexcept;

/// n samples, x uniform on the domain, y = curve(x) + N(0, noise_sigma).
Dataset gen_true(std::size_t n, const TrueCurve& curve, Rng& rng);

/// Noise-free held-out data: y = curve(x) exactly.
Dataset gen_test(std::size_t n, const TrueCurve& curve, Rng& rng);

/// Replaces exactly contamination_count(epsilon, n) samples and flags them.
/// Untouched samples are bitwise preserved. Throws InvalidInput when the
/// count would reach n or `clean` is empty.
Dataset contaminate(const Dataset& clean, const ContaminationSpec& spec,
                    const TrueCurve& curve, Rng& rng);

Dataset gen_nonuniform(std::size_t n, const TrueCurve& curve, const NonUniformSpec& spec,
                       Rng& rng);

/// SplitMix64 finalizer over (seed, stream); used to give every trial and
/// every stream inside a trial its own generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace mbgdt

#endif  // MBGDT_DATAGEN_HPP_
