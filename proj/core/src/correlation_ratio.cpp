#include "tcsa/correlation_ratio.hpp"

#include <cmath>

namespace tcsa {

double pf_eta_squared(const Vector& y, const Vector& y_prime) {
  const Eigen::Index n = y.size();
  if (n != y_prime.size()) throw Error("pick-and-freeze response pairs have different lengths");
  if (n < 2) throw Error("pick-and-freeze needs at least two pairs");
  const double mean = (y.sum() + y_prime.sum()) / static_cast<double>(2 * n);
  const double variance =
      ((y.array() - mean).square().sum() + (y_prime.array() - mean).square().sum()) / static_cast<double>(2 * n);
  if (!(variance > 0.0)) throw Error("pick-and-freeze response has zero variance");
  const double cross = y.dot(y_prime) / static_cast<double>(n);
  return (cross - mean * mean) / variance;
}

double pf_total_order(double complement_eta_squared) { return 1.0 - complement_eta_squared; }

double multidim_eta_squared(std::span<const double> variances, std::span<const double> eta_squared) {
  if (variances.size() != eta_squared.size() || variances.empty())
    throw Error("multidimensional correlation ratio needs one variance per coordinate");
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t j = 0; j < variances.size(); ++j) {
    if (!(variances[j] >= 0.0)) throw Error("coordinate variances must be nonnegative");
    numerator += variances[j] * eta_squared[j];
    denominator += variances[j];
  }
  if (!(denominator > 0.0)) throw Error("all coordinate variances are zero");
  return numerator / denominator;
}

double target_eta(const Vector& y, const Vector& y_prime, const WeightSpec& weight) {
  return pf_eta_squared(weight_eval(weight, y), weight_eval(weight, y_prime));
}

double hybrid_eta(const Vector& y, const Vector& y_prime, const WeightSpec& weight) {
  const Eigen::Index n = y.size();
  if (n != y_prime.size()) throw Error("pick-and-freeze response pairs have different lengths");
  Vector pooled(2 * n);
  pooled << y, y_prime;
  const Vector transformed = hybrid_transform(pooled, weight_eval(weight, pooled));
  return pf_eta_squared(transformed.head(n), transformed.tail(n));
}

PairedResponses evaluate_pairs(const ModelSpec& model, const PickFreezePairs& pairs) {
  return {eval_model(model, pairs.first), eval_model(model, pairs.second)};
}

EtaEstimate estimate_eta(const ModelSpec& model, const Matrix& base, const FactorGroup& group, Order order,
                         Mode mode, const WeightSpec& weight) {
  if (mode == Mode::conditional)
    throw Error("pick-and-freeze has no conditional version; use the hybrid mode or rmc-eta");
  const FactorGroup frozen = order == Order::first ? group : group.complement();
  const PairedResponses r = evaluate_pairs(model, pick_freeze_pairs(base, frozen));

  double eta = 0.0;
  switch (mode) {
    case Mode::global: eta = pf_eta_squared(r.y, r.y_prime); break;
    case Mode::target: eta = target_eta(r.y, r.y_prime, weight); break;
    case Mode::hybrid: eta = hybrid_eta(r.y, r.y_prime, weight); break;
    case Mode::conditional: break;
  }
  EtaEstimate out{group, order, mode, order == Order::first ? eta : pf_total_order(eta),
                  static_cast<std::size_t>(r.y.size())};
  out.out_of_range = out.value < 0.0 || out.value > 1.0;
  return out;
}

}  // namespace tcsa
