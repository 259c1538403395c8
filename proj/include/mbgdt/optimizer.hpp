#ifndef MBGDT_OPTIMIZER_HPP_
#define MBGDT_OPTIMIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "mbgdt/loss.hpp"
#include "mbgdt/types.hpp"

namespace mbgdt {

using Rng = std::mt19937_64;

/// Hyperparameters of one mini-batch gradient descent fit. With
/// trim_fraction == 0 and LossKind::Squared this is plain MBGD.
struct ModelConfig {
  std::size_t model_degree = 5;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  std::size_t max_iter = 20000;
  double convergence_tol = 1e-6;
  // Consecutive epoch-to-epoch changes below convergence_tol required to stop.
  std::size_t convergence_patience = 5;
  double trim_fraction = 0.0;
  double huber_delta = 0.3;
  LossKind loss_kind = LossKind::Huber;
  std::uint64_t seed = 0;
  // Min-max scale x onto [-1, 1] before featurizing.
  bool scale_x = true;

  /// floor(trim_fraction * batch_size)
  std::size_t trim_count() const noexcept;

  /// Throws InvalidInput when a field is out of range or no sample would
  /// survive trimming.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct TrainTrace {
  std::vector<double> iteration_losses;  // mean post-trim batch loss
  std::size_t iterations_run = 0;
  bool converged = false;

  friend bool operator==(const TrainTrace&, const TrainTrace&) = default;
};

struct FitResult {
  WeightVector weights;
  TrainTrace trace;
  ScaleParams scale;

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

struct FitPair {
  FitResult naive;
  FitResult trimmed;
};

/// What the optimizer did in one iteration. Spans are valid only during the
/// observer call.
struct IterationRecord {
  std::size_t iteration = 0;
  std::span<const std::size_t> batch;        // dataset indices, draw order
  std::span<const double> losses;            // per batch position
  std::span<const std::size_t> kept;         // batch positions, ascending
  const WeightVector* weights_before = nullptr;
  std::span<const double> gradient;          // the gradient actually applied
};

using FitObserver = std::function<void(const IterationRecord&)>;

/// batch_size distinct indices in [0, n), uniform without replacement.
std::vector<std::size_t> select_batch(Rng& rng, std::size_t n, std::size_t batch_size);

/// Drops the trim_count largest losses (ties: lower position dropped first)
/// and returns the kept positions in ascending order.
std::vector<std::size_t> trim_indices(std::span<const double> losses, std::size_t trim_count);

/// Mini-batch gradient descent with per-batch trimming of the highest-loss
/// samples.
///
/// The dataset is scaled (if enabled), w starts at zero, and each iteration
/// draws a fresh batch, drops the trim_count() highest losses, and steps
/// against the mean gradient of the kept samples. Convergence is declared when
/// the mean loss over one epoch (ceil(n / batch_size) iterations) has differed
/// from the previous epoch's by less than convergence_tol for
/// convergence_patience epochs in a row.
///
/// Throws InvalidInput on precondition violations and DivergenceError when a
/// loss, gradient or weight becomes non-finite.
FitResult fit(const Dataset& dataset, const ModelConfig& config,
              const FitObserver& observer = {});

/// The configuration of the naive baseline: no trimming, squared loss, all
/// else equal.
ModelConfig naive_config(ModelConfig config);

/// Fits the naive baseline and the configured trimmed model with one seed.
FitPair fit_pair(const Dataset& dataset, const ModelConfig& config);

}  // namespace mbgdt

#endif  // MBGDT_OPTIMIZER_HPP_
