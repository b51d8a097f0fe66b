#ifndef TCSA_RMC_HPP
#define TCSA_RMC_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "tcsa/sample.hpp"
#include "tcsa/types.hpp"

namespace tcsa {

enum class FeatureKind { sine, logistic, identity };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

struct FeatureFamily {
  FeatureKind kind = FeatureKind::sine;
  /// ceil(sqrt(n)) when unset; identity always keeps the variable's columns.
  std::optional<std::size_t> count;
  /// theta entries are N(0, gamma^2 / p).
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

/// Random projection parameters: column j of theta and b[j] define feature j.
struct FeatureParams {
  FeatureKind kind = FeatureKind::identity;
  Matrix theta;  // p x count
  Vector b;
};

std::size_t feature_count(const FeatureFamily& family, Eigen::Index n, Eigen::Index p);

/// Deterministic in (family.seed, p): groups of equal dimension share their
/// features.
FeatureParams draw_features(const FeatureFamily& family, std::size_t p, std::size_t count);

/// sin(x.theta + b), 1 / (1 + exp(-x.theta + b)), or the data itself.
Matrix project(const Matrix& data, const FeatureParams& params);

/// First canonical correlation between the column spans of a and b under
/// weighted covariances. Each diagonal block gets ridge * trace / size added.
double weighted_cca_first(const Matrix& a, const Matrix& b, double ridge = 1e-6);
double weighted_cca_first(const Matrix& a, const Matrix& b, const Vector& weights, double ridge = 1e-6);

/// 1 - (1 - r2)(n - 1)/(n - m), clamped to [0, 1].
double wherry_debias(double r2, double n, double m);

struct RmcConfig {
  FeatureFamily features_x;
  FeatureFamily features_y{FeatureKind::sine, std::nullopt, 1.0, 1};
  /// Weighted copula transform of the factor columns.
  bool copula = true;
  /// Same for the response; correlation-ratio mode keeps raw values.
  bool copula_y = true;
  double ridge = 1e-6;
  bool debias = true;
};

struct RmcEstimate {
  /// Squared canonical correlation after the optional debias.
  double value = 0.0;
  /// Squared canonical correlation before debias.
  double raw = 0.0;
  std::size_t k = 0;
  std::size_t l = 0;
  /// Debias left [0, 1] and was clamped.
  bool clamped = false;
};

/// Debias uses the effective size of the weights in place of n.
RmcEstimate rmc(const Variable& x, const Variable& y, const RmcConfig& config);
RmcEstimate rmc(const Variable& x, const Variable& y, const Vector& weights, const RmcConfig& config);

/// rmc with identity features on the response and no response copula: a
/// correlation-ratio estimate.
RmcEstimate rmc_eta_mode(const Variable& x, const Vector& y, const RmcConfig& config);
RmcEstimate rmc_eta_mode(const Variable& x, const Vector& y, const Vector& weights, const RmcConfig& config);

}  // namespace tcsa

#endif  // TCSA_RMC_HPP
