#include "tcsa/kernel_qdm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace tcsa {

namespace {

// Pairwise-distance medians above this many rows use the leading rows only.
constexpr Eigen::Index kExactMedianRows = 4000;

void check_weights(const Vector& w, Eigen::Index n) {
  if (w.size() != n) throw Error("weight vector length differs from the sample size");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) throw Error("weights must be finite and nonnegative");
  if (!(w.sum() > 0.0)) throw Error("weights have zero total mass");
}

struct Columns {
  std::vector<Eigen::Index> continuous;
  std::vector<Eigen::Index> categorical;
};

Columns split_columns(const Variable& data) {
  Columns c;
  for (Eigen::Index j = 0; j < data.cols(); ++j)
    (data.kinds[static_cast<std::size_t>(j)] == ColumnKind::continuous ? c.continuous : c.categorical).push_back(j);
  return c;
}

// Observations stored as columns so one row of the data is contiguous.
Matrix observations(const Variable& data, const std::vector<Eigen::Index>& cols) {
  Matrix t(static_cast<Eigen::Index>(cols.size()), data.rows());
  for (std::size_t c = 0; c < cols.size(); ++c) t.row(static_cast<Eigen::Index>(c)) = data.values.col(cols[c]).transpose();
  return t;
}

class KernelEval {
 public:
  KernelEval(const KernelSpec& kernel, const Variable& data) {
    const Columns cols = split_columns(data);
    if (std::holds_alternative<CategoricalKernel>(kernel)) {
      if (!cols.continuous.empty()) throw Error("categorical kernel applied to continuous data");
      family_ = Family::categorical;
    } else if (const auto* g = std::get_if<GaussianKernel>(&kernel)) {
      if (cols.continuous.empty()) throw Error("gaussian kernel needs at least one continuous column");
      if (!g->bandwidth) throw Error("gaussian kernel bandwidth is unresolved");
      if (!(*g->bandwidth > 0.0) || !std::isfinite(*g->bandwidth)) throw Error("gaussian bandwidth must be positive");
      family_ = Family::gaussian;
      scale_ = 1.0 / (2.0 * *g->bandwidth * *g->bandwidth);
    } else {
      if (!cols.categorical.empty()) throw Error("distance-covariance kernel applied to categorical data");
      family_ = Family::distance;
    }
    cont_ = observations(data, cols.continuous);
    cat_ = observations(data, cols.categorical);
    if (family_ == Family::distance) norms_ = cont_.colwise().norm().transpose();
  }

  double operator()(Eigen::Index i, Eigen::Index j) const {
    for (Eigen::Index c = 0; c < cat_.rows(); ++c)
      if (cat_(c, i) != cat_(c, j)) return 0.0;
    switch (family_) {
      case Family::categorical: return 1.0;
      case Family::gaussian: return std::exp(-squared_distance(i, j) * scale_);
      case Family::distance: return 0.5 * (norms_[i] + norms_[j]) - std::sqrt(squared_distance(i, j));
    }
    return 0.0;
  }

 private:
  enum class Family { gaussian, categorical, distance };

  double squared_distance(Eigen::Index i, Eigen::Index j) const {
    double s = 0.0;
    for (Eigen::Index c = 0; c < cont_.rows(); ++c) {
      const double diff = cont_(c, i) - cont_(c, j);
      s += diff * diff;
    }
    return s;
  }

  Family family_ = Family::gaussian;
  double scale_ = 0.0;
  Matrix cont_;
  Matrix cat_;
  Vector norms_;
};

struct GramLookup {
  const Matrix& k;
  double operator()(Eigen::Index i, Eigen::Index j) const { return k(i, j); }
};

// Each unordered pair contributes t(i,j) + t(j,i) so swapping the two kernels
// reproduces the same floating-point sum.
template <class KX, class KY>
double centered_sum(Eigen::Index n, const KX& kx, const KY& ky, const Vector& w) {
  check_weights(w, n);
  const Vector wh = w / w.sum();
  Vector a = Vector::Zero(n);
  Vector b = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double sa = 0.0;
    double sb = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
      if (wh[l] == 0.0) continue;
      sa += kx(i, l) * wh[l];
      sb += ky(i, l) * wh[l];
    }
    a[i] = sa;
    b[i] = sb;
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (wh[j] == 0.0) continue;
    for (Eigen::Index i = 0; i < j; ++i) {
      if (wh[i] == 0.0) continue;
      const double x = kx(i, j);
      const double y = ky(i, j);
      total += wh[i] * wh[j] * ((x - a[i]) * (y - b[j]) + (x - a[j]) * (y - b[i]));
    }
    total += wh[j] * wh[j] * ((kx(j, j) - a[j]) * (ky(j, j) - b[j]));
  }
  return total;
}

// Self-measures at rounding level of the kernel scale count as zero.
double normalize(double cross, double self_x, double self_y, double scale_x = 1.0, double scale_y = 1.0) {
  if (!(self_x > 1e-13 * scale_x) || !(self_y > 1e-13 * scale_y))
    throw Error("quadratic dependence self-measure is zero (constant variable)");
  return cross / std::sqrt(self_x * self_y);
}

void check_pair(const GramMatrix& gx, const GramMatrix& gy) {
  if (gx.values.rows() != gy.values.rows() || gx.values.rows() != gx.values.cols() ||
      gy.values.rows() != gy.values.cols())
    throw Error("gram matrices must be square and of equal size");
}

}  // namespace

std::string to_string(const KernelSpec& kernel) {
  if (const auto* g = std::get_if<GaussianKernel>(&kernel)) {
    if (!g->bandwidth) return "gaussian(median)";
    std::ostringstream out;
    out.precision(17);
    out << "gaussian(" << *g->bandwidth << ')';
    return out.str();
  }
  return std::holds_alternative<CategoricalKernel>(kernel) ? "categorical" : "distance_covariance";
}

KernelSpec default_kernel(const Variable& data) {
  if (data.all_categorical()) return CategoricalKernel{};
  return GaussianKernel{};
}

double resolve_bandwidth(const Variable& data) { return resolve_bandwidth(data, Vector::Ones(data.rows())); }

double resolve_bandwidth(const Variable& data, const Vector& weights) {
  const Eigen::Index n = std::min(data.rows(), kExactMedianRows);
  if (data.rows() < 2) throw Error("median heuristic needs at least two points");
  check_weights(weights, data.rows());
  const Columns cols = split_columns(data);
  if (cols.continuous.empty()) throw Error("median heuristic needs a continuous column");
  const Matrix t = observations(data, cols.continuous);

  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < n; ++i)
    if (weights[i] > 0.0) active.push_back(i);
  if (active.size() < 2) throw Error("median heuristic needs two points with positive weight");
  const bool equal = std::all_of(active.begin(), active.end(), [&](Eigen::Index i) { return weights[i] == weights[active[0]]; });

  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(active.size() * (active.size() - 1) / 2);
  for (std::size_t b = 1; b < active.size(); ++b)
    for (std::size_t a = 0; a < b; ++a) {
      const double dist = (t.col(active[a]) - t.col(active[b])).norm();
      pairs.emplace_back(dist, weights[active[a]] * weights[active[b]]);
    }

  double median = 0.0;
  if (equal) {
    const std::size_t k = (pairs.size() + 1) / 2 - 1;
    std::nth_element(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(k), pairs.end());
    median = pairs[k].first;
  } else {
    std::sort(pairs.begin(), pairs.end());
    double total = 0.0;
    for (const auto& p : pairs) total += p.second;
    double cumulative = 0.0;
    for (const auto& p : pairs) {
      cumulative += p.second;
      if (cumulative >= 0.5 * total) {
        median = p.first;
        break;
      }
    }
  }
  if (!(median > 0.0)) throw Error("median heuristic is zero: points are identical");
  return median;
}

KernelSpec resolve(const KernelSpec& kernel, const Variable& data, const Vector& weights) {
  if (const auto* g = std::get_if<GaussianKernel>(&kernel))
    if (!g->bandwidth) return GaussianKernel{resolve_bandwidth(data, weights)};
  return kernel;
}

GramMatrix gram(const KernelSpec& kernel, const Variable& data) {
  const KernelEval k(kernel, data);
  const Eigen::Index n = data.rows();
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      g(i, j) = k(i, j);
      g(j, i) = g(i, j);
    }
    g(j, j) = k(j, j);
  }
  return {std::move(g), kernel};
}

double qdm(const GramMatrix& gx, const GramMatrix& gy) { return qdm(gx, gy, Vector::Ones(gx.values.rows())); }

double qdm(const GramMatrix& gx, const GramMatrix& gy, const Vector& weights) {
  check_pair(gx, gy);
  return centered_sum(gx.values.rows(), GramLookup{gx.values}, GramLookup{gy.values}, weights);
}

double qdm_normalized(const GramMatrix& gx, const GramMatrix& gy) {
  return qdm_normalized(gx, gy, Vector::Ones(gx.values.rows()));
}

double qdm_normalized(const GramMatrix& gx, const GramMatrix& gy, const Vector& weights) {
  const double sx = gx.values.cwiseAbs().maxCoeff(), sy = gy.values.cwiseAbs().maxCoeff();
  return normalize(qdm(gx, gy, weights), qdm(gx, gx, weights), qdm(gy, gy, weights), sx * sx, sy * sy);
}

double qdm_hybrid(const GramMatrix& gx, const GramMatrix& gy, const Vector& w_values) {
  check_pair(gx, gy);
  const Eigen::Index n = gy.values.rows();
  if (w_values.size() != n) throw Error("weight vector length differs from the sample size");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(w_values[i] >= 0.0 && w_values[i] <= 1.0)) throw Error("hybrid weights must lie in [0, 1]");
  GramMatrix weighted{Matrix(n, n), gy.kernel};
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) weighted.values(i, j) = gy.values(i, j) * w_values[i] * w_values[j];
  return qdm(gx, weighted);
}

double qdm_index(const Variable& x, const Variable& y, const QdmOptions& options) {
  return qdm_index(x, y, Vector::Ones(x.rows()), options);
}

double qdm_index(const Variable& x, const Variable& y, const Vector& weights, const QdmOptions& options) {
  const Eigen::Index n = x.rows();
  if (y.rows() != n) throw Error("factor and response row counts differ");
  if (n < 2) throw Error("quadratic dependence measure needs at least two observations");
  check_weights(weights, n);
  const Variable xs = options.copula ? copula_continuous(x, weights) : x;
  const Variable ys = options.copula ? copula_continuous(y, weights) : y;
  const KernelSpec kx = resolve(options.kernel_x.value_or(default_kernel(xs)), xs, weights);
  const KernelSpec ky = resolve(options.kernel_y.value_or(default_kernel(ys)), ys, weights);

  if (n > options.streaming_threshold) {
    const KernelEval ex(kx, xs);
    const KernelEval ey(ky, ys);
    return normalize(centered_sum(n, ex, ey, weights), centered_sum(n, ex, ex, weights),
                     centered_sum(n, ey, ey, weights));
  }
  return qdm_normalized(gram(kx, xs), gram(ky, ys), weights);
}

double qdm_global(const Sample& sample, const FactorGroup& group, const QdmOptions& options) {
  return qdm_index(sample.select(group), sample.response_variable(), options);
}

double qdm_target(const Sample& sample, const FactorGroup& group, const WeightSpec& weight,
                  const QdmOptions& options) {
  validate(weight);
  const Vector wy = weight_eval(weight, sample.scalar_response());
  if (wy.maxCoeff() == wy.minCoeff()) throw Error("transformed response w(Y) is constant");
  QdmOptions opts = options;
  Variable target;
  if (is_binary(weight)) {
    target = Variable::column(wy, ColumnKind::categorical);
    opts.kernel_y = CategoricalKernel{};
  } else {
    target = Variable::column(wy);
    if (!opts.kernel_y) opts.kernel_y = GaussianKernel{};
  }
  return qdm_index(sample.select(group), target, opts);
}

double qdm_conditional(const Sample& sample, const FactorGroup& group, const WeightSpec& weight,
                       const QdmOptions& options) {
  validate(weight);
  return qdm_index(sample.select(group), sample.response_variable(), weight_eval(weight, sample.scalar_response()),
                   options);
}

}  // namespace tcsa
