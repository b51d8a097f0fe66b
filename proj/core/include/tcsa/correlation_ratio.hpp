#ifndef TCSA_CORRELATION_RATIO_HPP
#define TCSA_CORRELATION_RATIO_HPP

#include <span>

#include "tcsa/designs.hpp"
#include "tcsa/models.hpp"
#include "tcsa/sample.hpp"

namespace tcsa {

/// Pick-and-freeze correlation ratio from paired responses (Y_j, Y'_j) that
/// share the frozen group: ((1/n) sum Y Y' - mu^2) / V, with mu and V pooled
/// over all 2n responses.
double pf_eta_squared(const Vector& y, const Vector& y_prime);

/// 1 - eta^2 of the complement group.
double pf_total_order(double complement_eta_squared);

/// Variance-weighted combination of per-coordinate correlation ratios.
double multidim_eta_squared(std::span<const double> variances, std::span<const double> eta_squared);

/// Correlation ratio of the transformed response w(Y).
double target_eta(const Vector& y, const Vector& y_prime, const WeightSpec& weight);

/// Correlation ratio of the hybrid response w(Y)Y + (1-w(Y))y0, y0 pooled
/// over both members of every pair.
double hybrid_eta(const Vector& y, const Vector& y_prime, const WeightSpec& weight);

struct EtaEstimate {
  FactorGroup group;
  Order order = Order::first;
  Mode mode = Mode::global;
  double value = 0.0;
  std::size_t n = 0;
  /// Estimation noise pushed the value outside [0, 1]; never clamped.
  bool out_of_range = false;
};

/// Model responses at both members of every pick-and-freeze pair.
struct PairedResponses {
  Vector y;
  Vector y_prime;
};
PairedResponses evaluate_pairs(const ModelSpec& model, const PickFreezePairs& pairs);

/// First- or total-order pick-and-freeze estimate of a group from a 2n-row
/// base design. Conditional mode is rejected: conditioning breaks the factor
/// independence the estimator relies on.
EtaEstimate estimate_eta(const ModelSpec& model, const Matrix& base, const FactorGroup& group, Order order,
                         Mode mode = Mode::global, const WeightSpec& weight = ConstantWeight{});

}  // namespace tcsa

#endif  // TCSA_CORRELATION_RATIO_HPP
