#include "tcsa/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tcsa {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(std::string(what) + " contains non-finite entries");
}

void check_weights(const Vector& weights, Eigen::Index n) {
  if (weights.size() != n) throw Error("weight vector length does not match sample size");
  if ((weights.array() < 0.0).any() || !weights.allFinite())
    throw Error("weights must be finite and nonnegative");
  if (!(weights.sum() > 0.0)) throw Error("weights have zero total mass");
}

}  // namespace

Sample::Sample(Matrix factors, Matrix response, std::vector<ColumnKind> factor_kinds,
               std::vector<std::string> factor_names, std::vector<std::string> response_names)
    : factors_(std::move(factors)),
      response_(std::move(response)),
      factor_kinds_(std::move(factor_kinds)),
      factor_names_(std::move(factor_names)),
      response_names_(std::move(response_names)) {
  if (factors_.rows() < 1 || factors_.cols() < 1 || response_.cols() < 1)
    throw Error("sample needs n >= 1, d >= 1 and p >= 1");
  if (factors_.rows() != response_.rows()) throw Error("factor and response row counts differ");
  require_finite(factors_, "factor matrix");
  require_finite(response_, "response matrix");
  if (factor_kinds_.empty()) factor_kinds_.assign(static_cast<std::size_t>(d()), ColumnKind::continuous);
  if (static_cast<Eigen::Index>(factor_kinds_.size()) != d()) throw Error("factor kind count differs from d");
  if (factor_names_.empty())
    for (Eigen::Index j = 0; j < d(); ++j) factor_names_.push_back("X" + std::to_string(j + 1));
  if (response_names_.empty())
    for (Eigen::Index j = 0; j < p(); ++j) response_names_.push_back(p() == 1 ? "Y" : "Y" + std::to_string(j + 1));
  if (static_cast<Eigen::Index>(factor_names_.size()) != d() ||
      static_cast<Eigen::Index>(response_names_.size()) != p())
    throw Error("column names do not match sample shape");
}

Variable Sample::select(const FactorGroup& group) const {
  if (static_cast<Eigen::Index>(group.dimension()) != d()) throw Error("factor group dimension differs from sample");
  Matrix values(n(), static_cast<Eigen::Index>(group.size()));
  std::vector<ColumnKind> kinds;
  for (std::size_t k = 0; k < group.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(group.indices()[k]);
    values.col(static_cast<Eigen::Index>(k)) = factors_.col(j);
    kinds.push_back(factor_kinds_[group.indices()[k]]);
  }
  return Variable(std::move(values), std::move(kinds));
}

Variable Sample::response_variable() const { return Variable(response_); }

Vector Sample::scalar_response() const {
  if (p() != 1) throw Error("operation requires a scalar response");
  return response_.col(0);
}

WeightedSample::WeightedSample(Sample s, Vector w) : sample(std::move(s)), weights(std::move(w)) {
  check_weights(weights, sample.n());
}

void validate(const WeightSpec& spec) {
  if (const auto* smooth = std::get_if<SmoothExceedance>(&spec)) {
    if (!(smooth->smoothing > 0.0)) throw Error("smoothing factor must be positive");
    if (!(smooth->dispersion > 0.0)) throw Error("response dispersion must be positive");
    if (!std::isfinite(smooth->threshold)) throw Error("threshold must be finite");
  } else if (const auto* ind = std::get_if<IndicatorExceedance>(&spec)) {
    if (!std::isfinite(ind->threshold)) throw Error("threshold must be finite");
  }
}

bool is_binary(const WeightSpec& spec) { return !std::holds_alternative<SmoothExceedance>(spec); }

double weight_eval(const WeightSpec& spec, double y) {
  struct Visitor {
    double y;
    double operator()(const ConstantWeight&) const { return 1.0; }
    double operator()(const IndicatorExceedance& w) const { return y >= w.threshold ? 1.0 : 0.0; }
    double operator()(const SmoothExceedance& w) const {
      return std::exp(-std::max(w.threshold - y, 0.0) / (w.smoothing * w.dispersion));
    }
  };
  return std::visit(Visitor{y}, spec);
}

Vector weight_eval(const WeightSpec& spec, const Vector& y) {
  validate(spec);
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = weight_eval(spec, y[i]);
  return out;
}

double critical_threshold(std::span<const double> response, double level) {
  if (response.empty()) throw Error("critical threshold of an empty response");
  if (!(level > 0.0 && level < 1.0)) throw Error("quantile level must lie in (0, 1)");
  std::vector<double> sorted(response.begin(), response.end());
  const auto n = static_cast<double>(sorted.size());
  // The tolerance keeps level * n from overshooting an integer by one ulp.
  auto rank = static_cast<std::size_t>(std::ceil(level * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
  return sorted[rank - 1];
}

double critical_threshold(const Vector& response, double level) {
  return critical_threshold(std::span<const double>(response.data(), static_cast<std::size_t>(response.size())),
                            level);
}

Vector empirical_cdf_transform(const Vector& values) {
  return empirical_cdf_transform(values, Vector::Ones(values.size()));
}

Vector empirical_cdf_transform(const Vector& values, const Vector& weights) {
  const Eigen::Index n = values.size();
  if (n == 0) return Vector();
  check_weights(weights, n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });

  Vector out(n);
  double cumulative = 0.0;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start;
    while (stop < order.size() && values[order[stop]] == values[order[start]]) {
      cumulative += weights[order[stop]];
      ++stop;
    }
    for (std::size_t k = start; k < stop; ++k) out[order[k]] = cumulative;
    start = stop;
  }
  // Dividing by the running total (not a separately summed one) pins the
  // maximum to exactly 1.
  return out / cumulative;
}

Matrix copula_transform(const Variable& data) {
  return copula_transform(data, Vector::Ones(data.rows()));
}

Matrix copula_transform(const Variable& data, const Vector& weights) {
  if (!data.all_continuous()) throw Error("copula transform requires continuous columns");
  Matrix out(data.rows(), data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j)
    out.col(j) = empirical_cdf_transform(data.values.col(j), weights);
  return out;
}

Variable copula_continuous(const Variable& data, const Vector& weights) {
  Variable out = data;
  for (Eigen::Index j = 0; j < data.cols(); ++j)
    if (data.kinds[static_cast<std::size_t>(j)] == ColumnKind::continuous)
      out.values.col(j) = empirical_cdf_transform(data.values.col(j), weights);
  return out;
}

Matrix copula_transform(const Sample& sample, std::span<const std::size_t> columns) {
  return copula_transform(sample, columns, Vector::Ones(sample.n()));
}

Matrix copula_transform(const Sample& sample, std::span<const std::size_t> columns, const Vector& weights) {
  const FactorGroup group(std::vector<std::size_t>(columns.begin(), columns.end()),
                          static_cast<std::size_t>(sample.d()));
  return copula_transform(sample.select(group), weights);
}

Vector hybrid_transform(const Vector& response, const Vector& weights) {
  check_weights(weights, response.size());
  const double y0 = weights.dot(response) / weights.sum();
  Vector out(response.size());
  for (Eigen::Index i = 0; i < response.size(); ++i)
    out[i] = weights[i] * response[i] + (1.0 - weights[i]) * y0;
  return out;
}

Moments weighted_moments(const Matrix& values) {
  return weighted_moments(values, Vector::Ones(values.rows()));
}

Moments weighted_moments(const Matrix& values, const Vector& weights) {
  check_weights(weights, values.rows());
  const double total = weights.sum();
  Moments m;
  m.mean = (values.transpose() * weights) / total;
  const Matrix centered = values.rowwise() - m.mean.transpose();
  m.covariance = (centered.transpose() * weights.asDiagonal() * centered) / total;
  return m;
}

double dispersion(const Vector& values) {
  if (values.size() == 0) throw Error("dispersion of an empty vector");
  const double mean = values.mean();
  return std::sqrt((values.array() - mean).square().mean());
}

FiveNumberSummary five_number_summary(std::span<const double> values) {
  if (values.empty()) throw Error("five-number summary of an empty input");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  // Hinge positions as in Tukey's fivenum, 1-based.
  const double n4 = std::floor((n + 3.0) / 2.0) / 2.0;
  const auto at = [&](double pos) {
    const auto lo = static_cast<std::size_t>(std::floor(pos)) - 1;
    const auto hi = static_cast<std::size_t>(std::ceil(pos)) - 1;
    return 0.5 * (x[lo] + x[hi]);
  };
  FiveNumberSummary s;
  s.count = x.size();
  s.min = x.front();
  s.q1 = at(n4);
  s.median = at((n + 1.0) / 2.0);
  s.q3 = at(n + 1.0 - n4);
  s.max = x.back();
  const double spread = 1.5 * (s.q3 - s.q1);
  const double low_fence = s.q1 - spread;
  const double high_fence = s.q3 + spread;
  s.lower_whisker = s.max;
  s.upper_whisker = s.min;
  for (double v : x) {
    if (v < low_fence || v > high_fence) {
      s.outliers.push_back(v);
    } else {
      s.lower_whisker = std::min(s.lower_whisker, v);
      s.upper_whisker = std::max(s.upper_whisker, v);
    }
  }
  return s;
}

}  // namespace tcsa
