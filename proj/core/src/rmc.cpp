#include "tcsa/rmc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tcsa/designs.hpp"
#include "tcsa/density.hpp"

namespace tcsa {

namespace {

void check_weights(const Vector& w, Eigen::Index n) {
  if (w.size() != n) throw Error("weight vector length differs from the sample size");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) throw Error("weights must be finite and nonnegative");
  if (!(w.sum() > 0.0)) throw Error("weights have zero total mass");
}

Eigen::LLT<Matrix> regularized_cholesky(Matrix s, double ridge) {
  const double trace = s.trace();
  if (!(trace > 0.0)) throw Error("canonical correlation block has zero variance");
  s.diagonal().array() += ridge * trace / static_cast<double>(s.rows());
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) throw Error("regularized covariance is singular");
  // Collinear columns without ridge leave a pivot at rounding level.
  const Vector pivots = llt.matrixL().toDenseMatrix().diagonal().cwiseAbs2();
  if (pivots.minCoeff() <= 1e-12 * pivots.maxCoeff()) throw Error("regularized covariance is singular");
  return llt;
}

bool has_constant_column(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (m.col(j).maxCoeff() == m.col(j).minCoeff()) return true;
  return false;
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::sine: return "sine";
    case FeatureKind::logistic: return "logistic";
    case FeatureKind::identity: return "identity";
  }
  return "identity";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "sine") return FeatureKind::sine;
  if (text == "logistic") return FeatureKind::logistic;
  if (text == "identity") return FeatureKind::identity;
  throw Error("unknown feature family '" + std::string(text) + "'");
}

std::size_t feature_count(const FeatureFamily& family, Eigen::Index n, Eigen::Index p) {
  if (family.kind == FeatureKind::identity) return static_cast<std::size_t>(p);
  if (family.count) {
    if (*family.count < 1) throw Error("feature count must be positive");
    return *family.count;
  }
  return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
}

FeatureParams draw_features(const FeatureFamily& family, std::size_t p, std::size_t count) {
  if (p < 1) throw Error("feature parameters need a dimension of at least one");
  FeatureParams params;
  params.kind = family.kind;
  if (family.kind == FeatureKind::identity) return params;
  if (!(family.gamma > 0.0)) throw Error("feature scale gamma must be positive");
  std::mt19937_64 rng(derive_seed(family.seed, p));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = family.gamma / std::sqrt(static_cast<double>(p));
  params.theta.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(count));
  params.b.resize(static_cast<Eigen::Index>(count));
  for (Eigen::Index j = 0; j < params.theta.cols(); ++j) {
    for (Eigen::Index i = 0; i < params.theta.rows(); ++i) params.theta(i, j) = sd * normal(rng);
    params.b[j] = normal(rng);
  }
  return params;
}

Matrix project(const Matrix& data, const FeatureParams& params) {
  if (params.kind == FeatureKind::identity) return data;
  if (data.cols() != params.theta.rows()) throw Error("feature parameters were drawn for another dimension");
  const Matrix z = data * params.theta;
  if (params.kind == FeatureKind::sine) return (z.rowwise() + params.b.transpose()).array().sin().matrix();
  return (1.0 + ((-z).rowwise() + params.b.transpose()).array().exp()).inverse().matrix();
}

double weighted_cca_first(const Matrix& a, const Matrix& b, double ridge) {
  return weighted_cca_first(a, b, Vector::Ones(a.rows()), ridge);
}

double weighted_cca_first(const Matrix& a, const Matrix& b, const Vector& weights, double ridge) {
  if (a.rows() != b.rows()) throw Error("canonical correlation blocks have different row counts");
  if (a.cols() < 1 || b.cols() < 1) throw Error("canonical correlation blocks need at least one column");
  if (!(ridge >= 0.0)) throw Error("ridge must be nonnegative");
  check_weights(weights, a.rows());
  const Vector wh = weights / weights.sum();
  const Matrix ac = a.rowwise() - (a.transpose() * wh).transpose();
  const Matrix bc = b.rowwise() - (b.transpose() * wh).transpose();
  const Matrix saa = ac.transpose() * wh.asDiagonal() * ac;
  const Matrix sbb = bc.transpose() * wh.asDiagonal() * bc;
  const Matrix sab = ac.transpose() * wh.asDiagonal() * bc;

  const Eigen::LLT<Matrix> la = regularized_cholesky(saa, ridge);
  const Eigen::LLT<Matrix> lb = regularized_cholesky(sbb, ridge);
  const Matrix left = la.matrixL().solve(sab);
  const Matrix whitened = lb.matrixL().solve(left.transpose()).transpose();
  const double top = Eigen::JacobiSVD<Matrix>(whitened).singularValues()(0);
  return std::clamp(top, 0.0, 1.0);
}

double wherry_debias(double r2, double n, double m) {
  if (!(n > m)) throw Error("debias needs more observations than regressors");
  return std::clamp(1.0 - (1.0 - r2) * (n - 1.0) / (n - m), 0.0, 1.0);
}

RmcEstimate rmc(const Variable& x, const Variable& y, const RmcConfig& config) {
  return rmc(x, y, Vector::Ones(x.rows()), config);
}

RmcEstimate rmc(const Variable& x, const Variable& y, const Vector& weights, const RmcConfig& config) {
  const Eigen::Index n = x.rows();
  if (y.rows() != n) throw Error("factor and response row counts differ");
  check_weights(weights, n);
  if (has_constant_column(x.values)) throw Error("factor group has a constant column");
  if (has_constant_column(y.values)) throw Error("response is constant");
  const Matrix xs = config.copula ? copula_continuous(x, weights).values : x.values;
  const Matrix ys = config.copula_y ? copula_continuous(y, weights).values : y.values;

  RmcEstimate out;
  out.k = feature_count(config.features_x, n, x.cols());
  out.l = feature_count(config.features_y, n, y.cols());
  const Matrix a = project(xs, draw_features(config.features_x, static_cast<std::size_t>(x.cols()), out.k));
  const Matrix b = project(ys, draw_features(config.features_y, static_cast<std::size_t>(y.cols()), out.l));
  const double rho = weighted_cca_first(a, b, weights, config.ridge);
  out.raw = rho * rho;
  out.value = out.raw;
  if (config.debias) {
    const double m = static_cast<double>(out.k + out.l) - 1.0;
    const double n_eff = effective_size(weights);
    const double unclamped = 1.0 - (1.0 - out.raw) * (n_eff - 1.0) / (n_eff - m);
    out.value = wherry_debias(out.raw, n_eff, m);
    out.clamped = unclamped != out.value;
  }
  return out;
}

RmcEstimate rmc_eta_mode(const Variable& x, const Vector& y, const RmcConfig& config) {
  return rmc_eta_mode(x, y, Vector::Ones(x.rows()), config);
}

RmcEstimate rmc_eta_mode(const Variable& x, const Vector& y, const Vector& weights, const RmcConfig& config) {
  if (y.maxCoeff() == y.minCoeff()) throw Error("response is constant");
  RmcConfig eta = config;
  eta.features_y = FeatureFamily{FeatureKind::identity};
  eta.copula_y = false;
  return rmc(x, Variable::column(y), weights, eta);
}

}  // namespace tcsa
