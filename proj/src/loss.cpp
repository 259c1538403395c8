#include "mbgdt/loss.hpp"

#include <cassert>
#include <cmath>

namespace mbgdt {

double squared_loss(double a) noexcept { return 0.5 * a * a; }

double huber_loss(double a, double delta) noexcept {
  const double abs_a = std::fabs(a);
  if (abs_a <= delta) return 0.5 * a * a;
  return delta * (abs_a - 0.5 * delta);
}

double loss_value(double a, LossKind kind, double delta) noexcept {
  return kind == LossKind::Squared ? squared_loss(a) : huber_loss(a, delta);
}

double loss_derivative(double a, LossKind kind, double delta) noexcept {
  if (kind == LossKind::Squared || std::fabs(a) <= delta) return a;
  return a > 0 ? delta : -delta;
}

void batch_losses_into(const WeightVector& w, std::span<const Sample> samples,
                       LossKind kind, double delta, std::span<double> out) noexcept {
  assert(out.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[i] = loss_value(predict(w, samples[i].x) - samples[i].y, kind, delta);
  }
}

void batch_gradient_into(const WeightVector& w, std::span<const Sample> samples,
                         LossKind kind, double delta, std::span<double> out) noexcept {
  assert(out.size() == w.size());
  for (double& g : out) g = 0.0;
  for (const Sample& s : samples) {
    const double psi = loss_derivative(predict(w, s.x) - s.y, kind, delta);
    double p = 1.0;
    for (double& g : out) {
      g += psi * p;
      p *= s.x;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  for (double& g : out) g *= inv_n;
}

std::vector<double> batch_losses(const WeightVector& w, std::span<const Sample> samples,
                                 LossKind kind, double delta) {
  std::vector<double> out(samples.size());
  batch_losses_into(w, samples, kind, delta, out);
  return out;
}

std::vector<double> batch_gradient(const WeightVector& w, std::span<const Sample> samples,
                                   LossKind kind, double delta) {
  std::vector<double> out(w.size());
  batch_gradient_into(w, samples, kind, delta, out);
  return out;
}

}  // namespace mbgdt
