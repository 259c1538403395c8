#include "mbgdt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mbgdt/error.hpp"

namespace mbgdt {

std::size_t ModelConfig::trim_count() const noexcept {
  return static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(batch_size)));
}

void ModelConfig::validate() const {
  if (batch_size == 0) throw InvalidInput("batch_size must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidInput("learning_rate must be positive and finite");
  }
  if (max_iter == 0) throw InvalidInput("max_iter must be positive");
  if (!(convergence_tol >= 0.0)) throw InvalidInput("convergence_tol must be non-negative");
  if (convergence_patience == 0) throw InvalidInput("convergence_patience must be positive");
  if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) {
    throw InvalidInput("trim_fraction must lie in [0, 1)");
  }
  if (!(huber_delta > 0.0) || !std::isfinite(huber_delta)) {
    throw InvalidInput("huber_delta must be positive and finite");
  }
  if (trim_count() >= batch_size) {
    throw InvalidInput("trim_fraction leaves no sample in the batch");
  }
}

namespace {

// Floyd's sampling: k draws, no pool of size n.
void select_batch_into(Rng& rng, std::size_t n, std::span<std::size_t> out) {
  const std::size_t k = out.size();
  std::size_t filled = 0;
  for (std::size_t j = n - k; j < n; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    const auto end = out.begin() + static_cast<std::ptrdiff_t>(filled);
    out[filled++] = std::find(out.begin(), end, t) == end ? t : j;
  }
}

// Positions sorted so that the ones to drop come first.
void trim_into(std::span<const double> losses, std::size_t trim_count,
               std::vector<std::size_t>& order, std::vector<std::size_t>& kept) {
  order.resize(losses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  kept.clear();
  if (trim_count == 0) {
    kept.assign(order.begin(), order.end());
    return;
  }
  const auto drop_first = [&](std::size_t a, std::size_t b) {
    if (losses[a] != losses[b]) return losses[a] > losses[b];
    return a < b;
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(trim_count - 1),
                   order.end(), drop_first);
  // nth_element puts the trim_count drop-first positions ahead of the rest
  // (the comparator is a strict total order).
  kept.assign(order.begin() + static_cast<std::ptrdiff_t>(trim_count), order.end());
  std::sort(kept.begin(), kept.end());
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

}  // namespace

std::vector<std::size_t> select_batch(Rng& rng, std::size_t n, std::size_t batch_size) {
  if (batch_size == 0) throw InvalidInput("select_batch: batch_size must be positive");
  if (batch_size > n) {
    throw InvalidInput("select_batch: batch_size " + std::to_string(batch_size) +
                       " exceeds dataset size " + std::to_string(n));
  }
  std::vector<std::size_t> out(batch_size);
  select_batch_into(rng, n, out);
  return out;
}

std::vector<std::size_t> trim_indices(std::span<const double> losses, std::size_t trim_count) {
  if (trim_count >= losses.size()) {
    throw InvalidInput("trim_indices: trim_count must be smaller than the batch");
  }
  std::vector<std::size_t> order;
  std::vector<std::size_t> kept;
  trim_into(losses, trim_count, order, kept);
  return kept;
}

ModelConfig naive_config(ModelConfig config) {
  config.trim_fraction = 0.0;
  config.loss_kind = LossKind::Squared;
  return config;
}

FitResult fit(const Dataset& dataset, const ModelConfig& config, const FitObserver& observer) {
  config.validate();
  if (dataset.size() < config.batch_size) {
    throw InvalidInput("fit: dataset has " + std::to_string(dataset.size()) +
                       " samples, fewer than batch_size " + std::to_string(config.batch_size));
  }
  require_finite(dataset, "fit");

  FitResult result;
  Dataset train;
  if (config.scale_x) {
    std::tie(train, result.scale) = scale_x(dataset);
  } else {
    train = dataset;
    result.scale = ScaleParams::identity();
  }

  const std::size_t n = train.size();
  const std::size_t batch_size = config.batch_size;
  const std::size_t trim_count = config.trim_count();
  const std::size_t epoch_len = (n + batch_size - 1) / batch_size;

  Rng rng(config.seed);
  WeightVector w = WeightVector::zeros(config.model_degree);
  WeightVector w_before;
  std::vector<std::size_t> batch(batch_size);
  std::vector<Sample> batch_samples(batch_size);
  std::vector<double> losses(batch_size);
  std::vector<std::size_t> order;
  std::vector<std::size_t> kept;
  std::vector<Sample> kept_samples;
  kept_samples.reserve(batch_size);
  std::vector<double> grad(w.size());

  TrainTrace& trace = result.trace;
  trace.iteration_losses.reserve(std::min<std::size_t>(config.max_iter, 1u << 16));
  double epoch_sum = 0.0;
  double prev_epoch_mean = 0.0;
  bool have_prev_epoch = false;
  std::size_t quiet_epochs = 0;

  for (std::size_t it = 0; it < config.max_iter; ++it) {
    select_batch_into(rng, n, batch);
    for (std::size_t b = 0; b < batch_size; ++b) batch_samples[b] = train[batch[b]];
    batch_losses_into(w, batch_samples, config.loss_kind, config.huber_delta, losses);
    trim_into(losses, trim_count, order, kept);

    kept_samples.clear();
    double kept_loss = 0.0;
    for (std::size_t pos : kept) {
      kept_samples.push_back(batch_samples[pos]);
      kept_loss += losses[pos];
    }
    kept_loss /= static_cast<double>(kept.size());
    batch_gradient_into(w, kept_samples, config.loss_kind, config.huber_delta, grad);

    if (!std::isfinite(kept_loss)) throw DivergenceError(it, "non-finite batch loss");
    if (!all_finite(grad)) throw DivergenceError(it, "non-finite gradient");

    if (observer) {
      w_before = w;
      observer(IterationRecord{it, batch, losses, kept, &w_before, grad});
    }

    for (std::size_t k = 0; k < w.size(); ++k) w.coeffs[k] -= config.learning_rate * grad[k];
    if (!all_finite(w.coeffs)) throw DivergenceError(it, "non-finite weights");

    trace.iteration_losses.push_back(kept_loss);
    trace.iterations_run = it + 1;

    epoch_sum += kept_loss;
    if ((it + 1) % epoch_len == 0) {
      const double epoch_mean = epoch_sum / static_cast<double>(epoch_len);
      epoch_sum = 0.0;
      if (have_prev_epoch && std::fabs(epoch_mean - prev_epoch_mean) < config.convergence_tol) {
        if (++quiet_epochs >= config.convergence_patience) {
          trace.converged = true;
          break;
        }
      } else {
        quiet_epochs = 0;
      }
      prev_epoch_mean = epoch_mean;
      have_prev_epoch = true;
    }
  }

  result.weights = std::move(w);
  return result;
}

FitPair fit_pair(const Dataset& dataset, const ModelConfig& config) {
  FitPair out;
  out.naive = fit(dataset, naive_config(config));
  out.trimmed = fit(dataset, config);
  return out;
}

}  // namespace mbgdt
