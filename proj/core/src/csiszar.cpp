#include "tcsa/csiszar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace tcsa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRatioFloor = 1e-300;
constexpr double kRatioCeiling = 1e300;

// 0 * inf = 0.
double times(double mass, double value) { return mass == 0.0 ? 0.0 : mass * value; }

void check_same_universe(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  if (p.size() != q.size()) throw Error("discrete measures live on different label sets");
}

void check_weights(const Vector& w, Eigen::Index n) {
  if (w.size() != n) throw Error("weight vector length differs from the sample size");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) throw Error("weights must be finite and nonnegative");
  if (!(w.sum() > 0.0)) throw Error("weights have zero total mass");
}

double floored_phi(const PhiDivergence& phi, double ratio, std::size_t& floored) {
  if (!(ratio >= kRatioFloor)) {
    ratio = kRatioFloor;
    ++floored;
  } else if (ratio > kRatioCeiling) {
    ratio = kRatioCeiling;
    ++floored;
  }
  return phi(ratio);
}

struct Prepared {
  Variable x;
  Variable y;
};

Prepared prepare(const Variable& x, const Variable& y, const Vector& weights, const CsiszarOptions& options) {
  if (x.rows() != y.rows()) throw Error("factor and response row counts differ");
  if (x.rows() < 2) throw Error("divergence estimators need at least two observations");
  check_weights(weights, x.rows());
  if (options.copula) return {copula_continuous(x, weights), copula_continuous(y, weights)};
  return {x, y};
}

// Rows of x paired with every row of y: row i * n + j holds (x_i, y_j).
Matrix all_pairs(const Variable& x, const Variable& y) {
  const Eigen::Index n = x.rows();
  Matrix out(n * n, x.cols() + y.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      out.row(i * n + j).head(x.cols()) = x.values.row(i);
      out.row(i * n + j).tail(y.cols()) = y.values.row(j);
    }
  return out;
}

// Separable Gaussian joint density on all pairs through one matrix product.
Matrix kde_pair_density(const Variable& xy, Eigen::Index qx, const Vector& weights) {
  const Vector h = silverman_bandwidth(xy.values, weights);
  const Eigen::Index n = xy.rows();
  const Eigen::Index q = xy.cols();
  const Vector wh = weights / weights.sum();
  auto factor = [&](Eigen::Index first, Eigen::Index count) {
    Matrix k(n, n);
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index i = 0; i < n; ++i) {
        double e = 0.0;
        for (Eigen::Index c = first; c < first + count; ++c) {
          const double u = (xy.values(i, c) - xy.values(l, c)) / h[c];
          e += u * u;
        }
        k(i, l) = std::exp(-0.5 * e);
      }
    return k;
  };
  double norm = 1.0;
  for (Eigen::Index c = 0; c < q; ++c) norm /= h[c] * std::sqrt(2.0 * std::numbers::pi);
  const Matrix kx = factor(0, qx);
  const Matrix ky = factor(qx, q - qx);
  return norm * (kx * wh.asDiagonal() * ky.transpose());
}

}  // namespace

double PhiDivergence::operator()(double t) const {
  switch (kind) {
    case PhiKind::kl: return t == 0.0 ? 0.0 : (std::isinf(t) ? kInf : t * std::log(t));
    case PhiKind::reverse_kl: return t == 0.0 ? kInf : -std::log(t);
    case PhiKind::total_variation: return std::abs(t - 1.0);
    case PhiKind::hellinger: {
      const double r = std::sqrt(t) - 1.0;
      return r * r;
    }
    case PhiKind::pearson: return (t - 1.0) * (t - 1.0);
    case PhiKind::neyman: return t == 0.0 || std::isinf(t) ? kInf : (t - 1.0) * (t - 1.0) / t;
  }
  return kInf;
}

PhiDivergence PhiDivergence::conjugate() const {
  switch (kind) {
    case PhiKind::kl: return make_phi(PhiKind::reverse_kl);
    case PhiKind::reverse_kl: return make_phi(PhiKind::kl);
    case PhiKind::pearson: return make_phi(PhiKind::neyman);
    case PhiKind::neyman: return make_phi(PhiKind::pearson);
    default: return *this;
  }
}

PhiDivergence make_phi(PhiKind kind) {
  switch (kind) {
    case PhiKind::kl: return {kind, "kl", kInf, true, false};
    case PhiKind::reverse_kl: return {kind, "reverse-kl", 0.0, true, true};
    case PhiKind::total_variation: return {kind, "tv", 1.0, true, true};
    case PhiKind::hellinger: return {kind, "hellinger", 1.0, true, true};
    case PhiKind::pearson: return {kind, "pearson", kInf, true, true};
    case PhiKind::neyman: return {kind, "neyman", 1.0, true, true};
  }
  throw Error("unknown divergence kind");
}

PhiDivergence phi_by_name(std::string_view name) {
  for (const PhiDivergence& phi : phi_catalog())
    if (phi.name == name) return phi;
  if (name == "mi" || name == "-log") return make_phi(PhiKind::reverse_kl);
  if (name == "total-variation") return make_phi(PhiKind::total_variation);
  throw Error("unknown divergence '" + std::string(name) + "'");
}

std::vector<PhiDivergence> phi_catalog() {
  return {make_phi(PhiKind::kl),        make_phi(PhiKind::reverse_kl), make_phi(PhiKind::total_variation),
          make_phi(PhiKind::hellinger), make_phi(PhiKind::pearson),    make_phi(PhiKind::neyman)};
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> m) : mass(std::move(m)) {
  if (mass.empty()) throw Error("discrete measure needs at least one label");
  double total = 0.0;
  for (double v : mass) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error("discrete masses must be finite and nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error("discrete masses must sum to one");
}

DiscreteMeasure DiscreteMeasure::normalized(std::vector<double> m) {
  const double total = std::accumulate(m.begin(), m.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) throw Error("discrete masses have zero total");
  for (double& v : m) v /= total;
  return DiscreteMeasure(std::move(m));
}

double discrete_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q, const PhiDivergence& phi) {
  check_same_universe(p, q);
  double total = 0.0;
  for (std::size_t z = 0; z < p.size(); ++z)
    total += q[z] > 0.0 ? times(q[z], phi(p[z] / q[z])) : times(p[z], phi.phi_star_zero);
  return total;
}

double discrete_support_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q, const PhiDivergence& phi) {
  check_same_universe(p, q);
  if (!phi.nonneg_on_unit) throw Error("support divergence needs phi nonnegative on [0, 1]");
  double total = 0.0;
  for (std::size_t z = 0; z < p.size(); ++z)
    if (q[z] > 0.0) total += times(q[z], phi(p[z] / q[z]));
  return total;
}

DiscreteMeasure weighted(const DiscreteMeasure& p, const std::vector<double>& w) {
  if (w.size() != p.size()) throw Error("weight function and measure have different label sets");
  std::vector<double> m(p.size());
  for (std::size_t z = 0; z < p.size(); ++z) {
    if (!(w[z] >= 0.0) || !std::isfinite(w[z])) throw Error("weights must be finite and nonnegative");
    m[z] = p[z] * w[z];
  }
  return DiscreteMeasure::normalized(std::move(m));
}

double discrete_weighted_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q, const std::vector<double>& w,
                                    const PhiDivergence& phi) {
  return discrete_divergence(weighted(p, w), weighted(q, w), phi);
}

double discrete_weighted_support_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q,
                                            const std::vector<double>& w, const PhiDivergence& phi) {
  return discrete_support_divergence(weighted(p, w), weighted(q, w), phi);
}

DiscreteMeasure pushforward(const DiscreteMeasure& p, const std::vector<std::size_t>& f, std::size_t target_size) {
  if (f.size() != p.size()) throw Error("label map and measure have different label sets");
  std::vector<double> m(target_size, 0.0);
  for (std::size_t z = 0; z < p.size(); ++z) {
    if (f[z] >= target_size) throw Error("label map points outside the target universe");
    m[f[z]] += p[z];
  }
  return DiscreteMeasure::normalized(std::move(m));
}

DiscreteMeasure product(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  std::vector<double> m(p.size() * q.size());
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = 0; b < q.size(); ++b) m[a * q.size() + b] = p[a] * q[b];
  return DiscreteMeasure::normalized(std::move(m));
}

Variable join(const Variable& x, const Variable& y) {
  if (x.rows() != y.rows()) throw Error("cannot join variables with different row counts");
  Variable out;
  out.values.resize(x.rows(), x.cols() + y.cols());
  out.values << x.values, y.values;
  out.kinds = x.kinds;
  out.kinds.insert(out.kinds.end(), y.kinds.begin(), y.kinds.end());
  return out;
}

CsiszarEstimate scdm(const Variable& x, const Variable& y, const CsiszarOptions& options) {
  return scdm(x, y, Vector::Ones(x.rows()), options);
}

CsiszarEstimate scdm(const Variable& x, const Variable& y, const Vector& weights, const CsiszarOptions& options) {
  const Prepared d = prepare(x, y, weights, options);
  const Variable xy = join(d.x, d.y);
  const Vector px = DensityModel(d.x, options.density, weights).evaluate(d.x.values);
  const Vector py = DensityModel(d.y, options.density, weights).evaluate(d.y.values);
  const Vector pxy = DensityModel(xy, options.density, weights).evaluate(xy.values);
  const Vector wh = weights / weights.sum();
  CsiszarEstimate out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (wh[i] == 0.0) continue;
    out.value += wh[i] * floored_phi(options.phi, px[i] * py[i] / pxy[i], out.floored);
  }
  return out;
}

CsiszarEstimate cdm_full(const Variable& x, const Variable& y, const CsiszarOptions& options) {
  return cdm_full(x, y, Vector::Ones(x.rows()), options);
}

CsiszarEstimate cdm_full(const Variable& x, const Variable& y, const Vector& weights, const CsiszarOptions& options) {
  const Eigen::Index n = x.rows();
  if (n > options.full_size_limit)
    throw Error("full divergence estimator refused: n = " + std::to_string(n) + " exceeds the O(n^3) size limit " +
                std::to_string(options.full_size_limit));
  const Prepared d = prepare(x, y, weights, options);
  const Variable xy = join(d.x, d.y);
  const Vector px = DensityModel(d.x, options.density, weights).evaluate(d.x.values);
  const Vector py = DensityModel(d.y, options.density, weights).evaluate(d.y.values);

  Matrix pxy;
  if (std::holds_alternative<GaussianKde>(options.density) && xy.all_continuous()) {
    pxy = kde_pair_density(xy, d.x.cols(), weights);
  } else {
    const Vector flat = DensityModel(xy, options.density, weights).evaluate(all_pairs(d.x, d.y));
    pxy.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) pxy(i, j) = flat[i * n + j];
  }

  const Vector wh = weights / weights.sum();
  CsiszarEstimate out;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (wh[i] == 0.0) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (wh[j] == 0.0) continue;
      out.value += wh[i] * wh[j] * floored_phi(options.phi, pxy(i, j) / (px[i] * py[j]), out.floored);
    }
  }
  return out;
}

std::optional<double> cdm_normalized(double raw, double self_measure, double cap) {
  if (!(self_measure > 0.0) || !std::isfinite(self_measure) || self_measure > cap) return std::nullopt;
  return raw / self_measure;
}

std::optional<double> scdm_index(const Variable& x, const Variable& y, const Vector& weights,
                                 const CsiszarOptions& options) {
  const double raw = scdm(x, y, weights, options).value;
  return cdm_normalized(raw, scdm(x, x, weights, options).value, options.self_cap);
}

std::optional<double> cdm_full_index(const Variable& x, const Variable& y, const Vector& weights,
                                     const CsiszarOptions& options) {
  const double raw = cdm_full(x, y, weights, options).value;
  return cdm_normalized(raw, cdm_full(x, x, weights, options).value, options.self_cap);
}

}  // namespace tcsa
