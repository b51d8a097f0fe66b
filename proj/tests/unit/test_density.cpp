#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tcsa/density.hpp"
#include "tcsa/sample.hpp"

using namespace tcsa;

namespace {

Matrix uniforms(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u;
  Matrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

Matrix normals(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = z(rng);
  return m;
}

// Diagonal Gaussian mixture with Silverman widths, written out directly.
double kde_oracle(const Matrix& pts, const Eigen::RowVectorXd& at, const Vector& w) {
  const double total = w.sum();
  const double n_eff = total * total / w.squaredNorm();
  const auto q = static_cast<double>(pts.cols());
  double value = 0.0;
  for (Eigen::Index l = 0; l < pts.rows(); ++l) {
    double term = w[l] / total;
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const double mean = pts.col(j).dot(w) / total;
      const double var = (pts.col(j).array() - mean).square().matrix().dot(w) / total;
      const double h = std::sqrt(var) * std::pow(4.0 / ((q + 2.0) * n_eff), 1.0 / (q + 4.0));
      const double u = (at[j] - pts(l, j)) / h;
      term *= std::exp(-0.5 * u * u) / (h * std::sqrt(2.0 * std::numbers::pi));
    }
    value += term;
  }
  return value;
}

// Equal-weight kNN: share of points within the k-th L-infinity distance over the clipped box volume.
double knn_oracle(const Matrix& pts, const Eigen::RowVectorXd& at, std::size_t k) {
  std::vector<double> d;
  for (Eigen::Index l = 0; l < pts.rows(); ++l) d.push_back((pts.row(l) - at).cwiseAbs().maxCoeff());
  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  const double r = std::max(sorted[k - 1], 0.5 / static_cast<double>(pts.rows()));
  const double inside = static_cast<double>(std::count_if(d.begin(), d.end(), [&](double x) { return x <= sorted[k - 1]; }));
  double vol = 1.0;
  for (Eigen::Index j = 0; j < at.size(); ++j) vol *= std::min(at[j] + r, 1.0) - std::max(at[j] - r, 0.0);
  return inside / static_cast<double>(pts.rows()) / vol;
}

}  // namespace

TEST(Kde, TightClusterNearPeak) {
  Matrix pts(5, 1);
  pts << -0.02, -0.01, 0.0, 0.01, 0.02;
  Matrix at(1, 1);
  at << 0.0;
  const double d = kde_density(pts, at)[0];
  EXPECT_NEAR(d, kde_oracle(pts, at.row(0), Vector::Ones(5)), 1e-10);
  const double h = silverman_bandwidth(pts, Vector::Ones(5))[0];
  const double peak = 1.0 / (h * std::sqrt(2.0 * std::numbers::pi));
  EXPECT_GT(d, 0.5 * peak);
  EXPECT_LE(d, peak);
}

TEST(Kde, StandardNormalAtZero) {
  std::mt19937_64 rng(1);
  const Matrix pts = normals(10000, 1, rng);
  const double d = kde_density(pts, Matrix::Zero(1, 1))[0];
  EXPECT_NEAR(d / 0.3989422804014327, 1.0, 0.1);
}

TEST(Kde, MatchesOracleWeighted) {
  std::mt19937_64 rng(2);
  const Matrix pts = normals(60, 2, rng);
  const Vector w = uniforms(60, 1, rng).col(0);
  const Matrix at = normals(5, 2, rng);
  const Vector d = kde_density(pts, at, w);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(d[i], kde_oracle(pts, at.row(i), w), 1e-12);
}

TEST(Kde, UnitWeightsBitwise) {
  std::mt19937_64 rng(3);
  const Matrix pts = normals(100, 2, rng);
  const Matrix at = normals(10, 2, rng);
  const Vector a = kde_density(pts, at), b = kde_density(pts, at, Vector::Ones(100));
  EXPECT_TRUE((a.array() == b.array()).all());
}

TEST(Kde, DegenerateDimensionRejected) {
  Matrix pts(4, 2);
  pts << 0, 1, 1, 1, 2, 1, 3, 1;
  EXPECT_THROW(kde_density(pts, pts), Error);
  EXPECT_THROW(kde_density(Matrix::Zero(1, 1), Matrix::Zero(1, 1)), Error);
}

TEST(Knn, UniformInteriorNearOne) {
  std::mt19937_64 rng(4);
  const Matrix pts = uniforms(10000, 2, rng);
  Matrix at(3, 2);
  at << 0.5, 0.5, 0.3, 0.7, 0.6, 0.2;
  const Vector d = knn_copula_density(pts, at, default_neighbors(10000));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(d[i], 1.0, 0.25);
}

TEST(Knn, CornerTruncationCompensates) {
  std::mt19937_64 rng(5);
  const Matrix pts = uniforms(10000, 2, rng);
  Matrix at(4, 2);
  at << 0, 0, 1, 1, 0, 1, 1, 0;
  const Vector d = knn_copula_density(pts, at, default_neighbors(10000));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(d[i], 1.0, 0.25);
}

TEST(Knn, MaximalSmoothingIsFlat) {
  std::mt19937_64 rng(6);
  const Matrix pts = uniforms(500, 1, rng);
  const Vector d = knn_copula_density(pts, uniforms(20, 1, rng), 499);
  for (Eigen::Index i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], 1.0, 0.05);
}

TEST(Knn, MatchesOracle) {
  std::mt19937_64 rng(7);
  const Matrix pts = uniforms(80, 2, rng);
  const Matrix at = uniforms(10, 2, rng);
  for (std::size_t k : {1u, 5u, 33u, 79u}) {
    const Vector d = knn_copula_density(pts, at, k);
    for (Eigen::Index i = 0; i < 10; ++i) EXPECT_NEAR(d[i], knn_oracle(pts, at.row(i), k), 1e-12);
  }
}

TEST(Knn, UnitWeightsBitwiseAndConstantWeightsInvariant) {
  std::mt19937_64 rng(8);
  const Matrix pts = uniforms(200, 2, rng);
  const Matrix at = uniforms(15, 2, rng);
  const Vector a = knn_copula_density(pts, at, 20);
  const Vector b = knn_copula_density(pts, at, 20, Vector::Ones(200));
  const Vector c = knn_copula_density(pts, at, 20, Vector::Constant(200, 0.3));
  EXPECT_TRUE((a.array() == b.array()).all());
  EXPECT_LT((a - c).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Knn, RangeErrors) {
  std::mt19937_64 rng(9);
  const Matrix pts = uniforms(10, 1, rng);
  EXPECT_THROW(knn_copula_density(pts, pts, 0), Error);
  EXPECT_THROW(knn_copula_density(pts, pts, 10), Error);
  EXPECT_THROW(knn_copula_density(pts * 2.0, pts, 3), Error);
}

TEST(Knn, DefaultNeighbors) {
  EXPECT_EQ(default_neighbors(1000), static_cast<std::size_t>(std::ceil(std::pow(1000.0, 0.8))));
  EXPECT_EQ(default_neighbors(2), 1u);
  EXPECT_LT(default_neighbors(3), 3u);
}

TEST(EffectiveSize, Kish) {
  EXPECT_DOUBLE_EQ(effective_size(Vector::Ones(7)), 7.0);
  Vector w(3);
  w << 1, 1, 2;
  EXPECT_DOUBLE_EQ(effective_size(w), 16.0 / 6.0);
}

TEST(DensityModelTest, CategoricalCellsTimesContinuousKde) {
  std::mt19937_64 rng(10);
  Matrix m(60, 2);
  m.col(0) = normals(60, 1, rng).col(0);
  for (Eigen::Index i = 0; i < 60; ++i) m(i, 1) = i % 3 == 0 ? 1.0 : 0.0;
  const Variable v(m, {ColumnKind::continuous, ColumnKind::categorical});
  const DensityModel model(v, GaussianKde{}, Vector::Ones(60));
  Matrix at(3, 2);
  at << 0.1, 0.0, -0.4, 1.0, 0.2, 5.0;
  const Vector d = model.evaluate(at);
  for (Eigen::Index i = 0; i < 2; ++i) {
    std::vector<double> cell;
    for (Eigen::Index r = 0; r < 60; ++r)
      if (m(r, 1) == at(i, 1)) cell.push_back(m(r, 0));
    const Matrix pts = Eigen::Map<const Vector>(cell.data(), static_cast<Eigen::Index>(cell.size()));
    const double mass = static_cast<double>(cell.size()) / 60.0;
    Eigen::RowVectorXd x(1);
    x << at(i, 0);
    EXPECT_NEAR(d[i], mass * kde_oracle(pts, x, Vector::Ones(pts.rows())), 1e-12);
  }
  EXPECT_EQ(d[2], 0.0);
}

TEST(DensityModelTest, AllCategoricalIsFrequency) {
  Matrix m(6, 1);
  m << 0, 0, 1, 1, 1, 2;
  const DensityModel model(Variable(m, {ColumnKind::categorical}), KnnCopula{}, Vector::Ones(6));
  Matrix at(3, 1);
  at << 0, 1, 2;
  const Vector d = model.evaluate(at);
  EXPECT_DOUBLE_EQ(d[0], 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(d[1], 3.0 / 6.0);
  EXPECT_DOUBLE_EQ(d[2], 1.0 / 6.0);
}

TEST(DensityModelTest, ZeroWeightRowsIgnored) {
  std::mt19937_64 rng(11);
  const Matrix pts = uniforms(50, 1, rng);
  Vector w = Vector::Ones(50);
  w.tail(10).setZero();
  const DensityModel model(Variable(pts), GaussianKde{}, w);
  const Matrix at = uniforms(5, 1, rng);
  const Vector expected = kde_density(pts.topRows(40), at);
  EXPECT_LT((model.evaluate(at) - expected).cwiseAbs().maxCoeff(), 1e-12);
}
