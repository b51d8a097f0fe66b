#include "tcsa/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "tcsa/sample.hpp"

namespace tcsa {

namespace {

void check_weights(const Vector& w, Eigen::Index n) {
  if (w.size() != n) throw Error("weight vector length differs from the number of points");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) throw Error("weights must be finite and nonnegative");
  if (!(w.sum() > 0.0)) throw Error("weights have zero total mass");
}

void check_unit_cube(const Matrix& m, const char* what) {
  if (m.size() > 0 && (m.minCoeff() < 0.0 || m.maxCoeff() > 1.0))
    throw Error(std::string(what) + " must lie in the unit cube for the copula nearest-neighbor density");
}

Vector kde_core(const Matrix& points, const Matrix& at, const Vector& w, const Vector& h) {
  const Eigen::Index q = points.cols();
  if (at.cols() != q) throw Error("evaluation points have the wrong dimension");
  const Matrix pt = points.transpose();
  const Vector inv_h = h.cwiseInverse();
  double norm = 1.0;
  for (Eigen::Index j = 0; j < q; ++j) norm *= inv_h[j] / std::sqrt(2.0 * std::numbers::pi);
  const double total = w.sum();
  Vector out(at.rows());
  for (Eigen::Index i = 0; i < at.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index l = 0; l < pt.cols(); ++l) {
      if (w[l] == 0.0) continue;
      double e = 0.0;
      for (Eigen::Index j = 0; j < q; ++j) {
        const double u = (at(i, j) - pt(j, l)) * inv_h[j];
        e += u * u;
      }
      s += w[l] * std::exp(-0.5 * e);
    }
    out[i] = s / total * norm;
  }
  return out;
}

Vector knn_core(const Matrix& points, const Matrix& at, std::size_t k, const Vector& w) {
  const Eigen::Index q = points.cols();
  if (at.cols() != q) throw Error("evaluation points have the wrong dimension");
  check_unit_cube(points, "points");
  check_unit_cube(at, "evaluation points");

  std::vector<Eigen::Index> active;
  for (Eigen::Index l = 0; l < points.rows(); ++l)
    if (w[l] > 0.0) active.push_back(l);
  const bool equal = std::all_of(active.begin(), active.end(), [&](Eigen::Index l) { return w[l] == w[active[0]]; });
  const double n_eff = effective_size(w);
  if (k < 1 || static_cast<double>(k) > n_eff * (1.0 + 1e-12)) throw Error("neighbor count out of range");

  Matrix pt(q, static_cast<Eigen::Index>(active.size()));
  Vector v(static_cast<Eigen::Index>(active.size()));
  const double scale = n_eff / w.sum();
  for (std::size_t a = 0; a < active.size(); ++a) {
    pt.col(static_cast<Eigen::Index>(a)) = points.row(active[a]).transpose();
    v[static_cast<Eigen::Index>(a)] = w[active[a]] * scale;
  }
  const double total_v = v.sum();
  const double floor_radius = 0.5 / static_cast<double>(points.rows());
  const auto m = static_cast<Eigen::Index>(active.size());

  std::vector<double> dist(active.size());
  std::vector<std::pair<double, double>> ranked;
  Vector out(at.rows());
  for (Eigen::Index i = 0; i < at.rows(); ++i) {
    for (Eigen::Index a = 0; a < m; ++a) {
      double d = 0.0;
      for (Eigen::Index j = 0; j < q; ++j) d = std::max(d, std::abs(at(i, j) - pt(j, a)));
      dist[static_cast<std::size_t>(a)] = d;
    }
    double radius = 0.0;
    double fraction = 0.0;
    if (equal) {
      std::vector<double> work = dist;
      std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(k - 1), work.end());
      radius = work[k - 1];
      const auto inside = std::count_if(dist.begin(), dist.end(), [&](double d) { return d <= radius; });
      fraction = static_cast<double>(inside) / static_cast<double>(m);
    } else {
      ranked.clear();
      for (Eigen::Index a = 0; a < m; ++a) ranked.emplace_back(dist[static_cast<std::size_t>(a)], v[a]);
      std::sort(ranked.begin(), ranked.end());
      double cumulative = 0.0;
      std::size_t r = 0;
      while (r < ranked.size() && cumulative < static_cast<double>(k) * (1.0 - 1e-12)) cumulative += ranked[r++].second;
      radius = ranked[r - 1].first;
      while (r < ranked.size() && ranked[r].first <= radius) cumulative += ranked[r++].second;
      fraction = cumulative / total_v;
    }
    radius = std::max(radius, floor_radius);
    double volume = 1.0;
    for (Eigen::Index j = 0; j < q; ++j) volume *= std::min(at(i, j) + radius, 1.0) - std::max(at(i, j) - radius, 0.0);
    out[i] = fraction / volume;
  }
  return out;
}

}  // namespace

std::string to_string(const DensitySpec& spec) {
  if (const auto* knn = std::get_if<KnnCopula>(&spec))
    return knn->k ? "knn_copula(" + std::to_string(*knn->k) + ")" : "knn_copula";
  return "gaussian_kde";
}

double effective_size(const Vector& weights) {
  const double s = weights.sum();
  return s * s / weights.squaredNorm();
}

std::size_t default_neighbors(double n) {
  auto k = static_cast<std::size_t>(std::ceil(std::pow(n, 0.8)));
  if (n > 1.0 && static_cast<double>(k) >= n) k = static_cast<std::size_t>(std::ceil(n)) - 1;
  return std::max<std::size_t>(k, 1);
}

Vector silverman_bandwidth(const Matrix& points, const Vector& weights) {
  check_weights(weights, points.rows());
  const Moments m = weighted_moments(points, weights);
  const auto q = static_cast<double>(points.cols());
  const double factor = std::pow(4.0 / ((q + 2.0) * effective_size(weights)), 1.0 / (q + 4.0));
  Vector h(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const double sigma = std::sqrt(m.covariance(j, j));
    if (!(sigma > 0.0)) throw Error("kernel density dimension has zero spread");
    h[j] = sigma * factor;
  }
  return h;
}

Vector kde_density(const Matrix& points, const Matrix& eval_at) {
  return kde_density(points, eval_at, Vector::Ones(points.rows()));
}

Vector kde_density(const Matrix& points, const Matrix& eval_at, const Vector& weights) {
  if (points.rows() < 2) throw Error("kernel density needs at least two points");
  return kde_core(points, eval_at, weights, silverman_bandwidth(points, weights));
}

Vector knn_copula_density(const Matrix& points, const Matrix& eval_at, std::size_t k) {
  return knn_copula_density(points, eval_at, k, Vector::Ones(points.rows()));
}

Vector knn_copula_density(const Matrix& points, const Matrix& eval_at, std::size_t k, const Vector& weights) {
  check_weights(weights, points.rows());
  if (k < 1 || k >= static_cast<std::size_t>(points.rows())) throw Error("neighbor count must satisfy 1 <= k < n");
  return knn_core(points, eval_at, k, weights);
}

DensityModel::DensityModel(const Variable& points, const DensitySpec& spec, const Vector& weights) : spec_(spec) {
  check_weights(weights, points.rows());
  for (Eigen::Index j = 0; j < points.cols(); ++j)
    (points.kinds[static_cast<std::size_t>(j)] == ColumnKind::continuous ? continuous_ : categorical_).push_back(j);

  std::map<std::vector<double>, std::vector<Eigen::Index>> members;
  std::vector<double> key(categorical_.size());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (weights[i] == 0.0) continue;
    for (std::size_t c = 0; c < categorical_.size(); ++c) key[c] = points.values(i, categorical_[c]);
    members[key].push_back(i);
  }

  const double total = weights.sum();
  for (const auto& [cell_key, rows] : members) {
    Cell cell;
    cell.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(continuous_.size()));
    cell.weights.resize(static_cast<Eigen::Index>(rows.size()));
    double mass = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      for (std::size_t c = 0; c < continuous_.size(); ++c)
        cell.points(row, static_cast<Eigen::Index>(c)) = points.values(rows[r], continuous_[c]);
      cell.weights[row] = weights[rows[r]];
      mass += weights[rows[r]];
    }
    cell.mass = mass / total;
    if (!continuous_.empty()) {
      if (std::holds_alternative<GaussianKde>(spec_)) {
        if (rows.size() < 2) throw Error("kernel density cell holds fewer than two points");
        cell.bandwidth = silverman_bandwidth(cell.points, cell.weights);
      } else {
        check_unit_cube(cell.points, "points");
        const auto& knn = std::get<KnnCopula>(spec_);
        cell.k = knn.k ? *knn.k : default_neighbors(effective_size(cell.weights));
      }
    }
    cells_.emplace(cell_key, std::move(cell));
  }
}

Vector DensityModel::evaluate(const Matrix& eval_at) const {
  Vector out = Vector::Zero(eval_at.rows());
  std::map<std::vector<double>, std::vector<Eigen::Index>> groups;
  std::vector<double> key(categorical_.size());
  for (Eigen::Index i = 0; i < eval_at.rows(); ++i) {
    for (std::size_t c = 0; c < categorical_.size(); ++c) key[c] = eval_at(i, categorical_[c]);
    groups[key].push_back(i);
  }
  for (const auto& [cell_key, rows] : groups) {
    const auto found = cells_.find(cell_key);
    if (found == cells_.end()) continue;
    const Cell& cell = found->second;
    if (continuous_.empty()) {
      for (Eigen::Index i : rows) out[i] = cell.mass;
      continue;
    }
    Matrix at(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(continuous_.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < continuous_.size(); ++c)
        at(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = eval_at(rows[r], continuous_[c]);
    const Vector d = std::holds_alternative<GaussianKde>(spec_) ? kde_core(cell.points, at, cell.weights, cell.bandwidth)
                                                               : knn_core(cell.points, at, cell.k, cell.weights);
    for (std::size_t r = 0; r < rows.size(); ++r) out[rows[r]] = cell.mass * d[static_cast<Eigen::Index>(r)];
  }
  return out;
}

}  // namespace tcsa
