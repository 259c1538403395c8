#ifndef MBGDT_LOSS_HPP_
#define MBGDT_LOSS_HPP_

#include <span>
#include <vector>

#include "mbgdt/types.hpp"

namespace mbgdt {

enum class LossKind { Squared, Huber };

// Residuals are always prediction minus target.

/// a^2 / 2, the same as the quadratic branch of the Huber loss.
double squared_loss(double a) noexcept;

/// a^2 / 2 for |a| <= delta, delta * (|a| - delta / 2) otherwise.
double huber_loss(double a, double delta) noexcept;

double loss_value(double a, LossKind kind, double delta) noexcept;

/// Squared: a. Huber: a clipped to [-delta, delta].
double loss_derivative(double a, LossKind kind, double delta) noexcept;

/// Per-sample loss of predict(w, x_i) - y_i, in input order.
std::vector<double> batch_losses(const WeightVector& w, std::span<const Sample> samples,
                                 LossKind kind, double delta);

/// Gradient of the mean batch loss with respect to w:
///   (1/n) sum_i loss_derivative(r_i) * featurize(x_i).
/// Samples are accumulated in input order.
std::vector<double> batch_gradient(const WeightVector& w, std::span<const Sample> samples,
                                   LossKind kind, double delta);

// Allocation-free variants used by the optimizer loop. `out` must have size
// samples.size() (losses) or w.size() (gradient).
void batch_losses_into(const WeightVector& w, std::span<const Sample> samples,
                       LossKind kind, double delta, std::span<double> out) noexcept;
void batch_gradient_into(const WeightVector& w, std::span<const Sample> samples,
                         LossKind kind, double delta, std::span<double> out) noexcept;

}  // namespace mbgdt

#endif  // MBGDT_LOSS_HPP_
