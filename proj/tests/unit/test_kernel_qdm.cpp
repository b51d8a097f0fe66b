#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tcsa/designs.hpp"
#include "tcsa/kernel_qdm.hpp"
#include "tcsa/models.hpp"

using namespace tcsa;

namespace {

// Literal double sum: sum_ij w_i w_j (Kx_ij - sum_l Kx_il w_l)(Ky_ij - sum_l Ky_lj w_l).
double qdm_oracle(const Matrix& kx, const Matrix& ky, Vector w) {
  w /= w.sum();
  const Eigen::Index n = kx.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double a = 0.0, b = 0.0;
      for (Eigen::Index l = 0; l < n; ++l) {
        a += kx(i, l) * w[l];
        b += ky(l, j) * w[l];
      }
      total += w[i] * w[j] * (kx(i, j) - a) * (ky(i, j) - b);
    }
  return total;
}

Matrix gaussian_gram(const Matrix& x, double sigma) {
  const Eigen::Index n = x.rows();
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = std::exp(-(x.row(i) - x.row(j)).squaredNorm() / (2 * sigma * sigma));
  return k;
}

Matrix normals(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = z(rng);
  return m;
}

Vector uniforms(Eigen::Index n, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

Vector shuffled(const Vector& v, std::mt19937_64& rng) {
  Vector out = v;
  std::shuffle(out.data(), out.data() + out.size(), rng);
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST(Bandwidth, MedianHeuristicExamples) {
  Matrix two(2, 1);
  two << 0, 1;
  EXPECT_EQ(resolve_bandwidth(Variable(two)), 1.0);
  Matrix three(3, 1);
  three << 0, 1, 3;
  EXPECT_EQ(resolve_bandwidth(Variable(three)), 2.0);
  EXPECT_THROW(resolve_bandwidth(Variable(Matrix::Constant(4, 2, 1.5))), Error);
}

TEST(Bandwidth, WeightedMedianFollowsPairWeights) {
  Matrix three(3, 1);
  three << 0, 1, 3;
  // Pair weights w_i w_j: distance 1 -> 1, distance 3 -> 100, distance 2 -> 100.
  Vector w(3);
  w << 1, 1, 100;
  EXPECT_EQ(resolve_bandwidth(Variable(three), w), 2.0);
  // Dropping the point at 3 leaves the single distance 1.
  w << 1, 1, 0;
  EXPECT_EQ(resolve_bandwidth(Variable(three), w), 1.0);
}

TEST(Gram, GaussianUnitDiagonal) {
  std::mt19937_64 rng(1);
  const Matrix x = normals(20, 2, rng);
  const GramMatrix g = gram(GaussianKernel{0.7}, Variable(x));
  for (Eigen::Index i = 0; i < 20; ++i) EXPECT_EQ(g.values(i, i), 1.0);
  EXPECT_TRUE((g.values.array() == g.values.transpose().array()).all());
  EXPECT_LT((g.values - gaussian_gram(x, 0.7)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gram, CategoricalIndicator) {
  const Variable v = Variable::column((Vector(3) << 0, 1, 0).finished(), ColumnKind::categorical);
  const GramMatrix g = gram(CategoricalKernel{}, v);
  Matrix expected(3, 3);
  expected << 1, 0, 1, 0, 1, 0, 1, 0, 1;
  EXPECT_TRUE((g.values.array() == expected.array()).all());
}

TEST(Gram, DistanceCovarianceDiagonalIsNorm) {
  Matrix x(2, 2);
  x << 3, 4, 1, 0;
  const GramMatrix g = gram(DistanceCovarianceKernel{}, Variable(x));
  EXPECT_DOUBLE_EQ(g.values(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(g.values(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(g.values(0, 1), 0.5 * (5.0 + 1.0) - std::sqrt(4.0 + 16.0));
}

TEST(Gram, KindMismatchRejected) {
  std::mt19937_64 rng(2);
  EXPECT_THROW(gram(CategoricalKernel{}, Variable(normals(5, 1, rng))), Error);
  const Variable cat = Variable::column((Vector(3) << 0, 1, 0).finished(), ColumnKind::categorical);
  EXPECT_THROW(gram(DistanceCovarianceKernel{}, cat), Error);
  EXPECT_THROW(gram(GaussianKernel{}, Variable(normals(5, 1, rng))), Error);  // unresolved bandwidth
  EXPECT_THROW(gram(GaussianKernel{-1.0}, Variable(normals(5, 1, rng))), Error);
}

TEST(Qdm, MatchesLiteralDoubleSum) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Matrix x = normals(30, 2, rng);
    Matrix y = x.col(0).array().square().matrix() + 0.5 * normals(30, 1, rng);
    const GramMatrix gx = gram(GaussianKernel{1.1}, Variable(x));
    const GramMatrix gy = gram(GaussianKernel{0.8}, Variable(y));
    const Vector w = uniforms(30, rng);
    EXPECT_NEAR(qdm(gx, gy), qdm_oracle(gx.values, gy.values, Vector::Ones(30)), 1e-13);
    EXPECT_NEAR(qdm(gx, gy, w), qdm_oracle(gx.values, gy.values, w), 1e-13);
  }
}

TEST(Qdm, ConstantResponseGivesZero) {
  std::mt19937_64 rng(4);
  const GramMatrix gx = gram(GaussianKernel{1.0}, Variable(normals(25, 1, rng)));
  const GramMatrix gy{Matrix::Ones(25, 25), CategoricalKernel{}};
  EXPECT_NEAR(qdm(gx, gy), 0.0, 1e-15);
}

TEST(Qdm, UnitWeightsBitwise) {
  std::mt19937_64 rng(5);
  const GramMatrix gx = gram(GaussianKernel{1.0}, Variable(normals(40, 2, rng)));
  const GramMatrix gy = gram(GaussianKernel{1.3}, Variable(normals(40, 1, rng)));
  EXPECT_EQ(qdm(gx, gy), qdm(gx, gy, Vector::Ones(40)));
  EXPECT_EQ(qdm_normalized(gx, gy), qdm_normalized(gx, gy, Vector::Ones(40)));
}

TEST(Qdm, SymmetricAndNonnegative) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const GramMatrix gx = gram(GaussianKernel{0.9}, Variable(normals(35, 2, rng)));
    const GramMatrix gy = gram(GaussianKernel{1.2}, Variable(normals(35, 1, rng)));
    const Vector w = uniforms(35, rng);
    EXPECT_EQ(qdm(gx, gy), qdm(gy, gx));
    EXPECT_EQ(qdm(gx, gy, w), qdm(gy, gx, w));
    EXPECT_GE(qdm(gx, gy), -1e-12);
    EXPECT_GE(qdm(gx, gy, w), -1e-12);
  }
}

TEST(Qdm, ShapeAndMassErrors) {
  std::mt19937_64 rng(7);
  const GramMatrix a = gram(GaussianKernel{1.0}, Variable(normals(5, 1, rng)));
  const GramMatrix b = gram(GaussianKernel{1.0}, Variable(normals(6, 1, rng)));
  EXPECT_THROW(qdm(a, b), Error);
  EXPECT_THROW(qdm(a, a, Vector::Zero(5)), Error);
}

TEST(QdmNormalized, SelfIsOne) {
  std::mt19937_64 rng(8);
  const GramMatrix g = gram(GaussianKernel{1.0}, Variable(normals(50, 3, rng)));
  EXPECT_EQ(qdm_normalized(g, g), 1.0);
  const Matrix x = normals(60, 2, rng);
  EXPECT_EQ(qdm_index(Variable(x), Variable(x)), 1.0);
  EXPECT_EQ(qdm_index(Variable(x), Variable(x), QdmOptions{.copula = true}), 1.0);
}

TEST(QdmNormalized, ConstantVariableRejected) {
  std::mt19937_64 rng(9);
  const Variable c(Matrix::Constant(10, 1, 2.0));
  EXPECT_THROW(qdm_index(c, Variable(normals(10, 1, rng))), Error);
  const GramMatrix g{Matrix::Ones(10, 10), CategoricalKernel{}};
  const GramMatrix h = gram(GaussianKernel{1.0}, Variable(normals(10, 1, rng)));
  EXPECT_THROW(qdm_normalized(g, h), Error);
}

TEST(QdmNormalized, IshigamiSecondFactorSmallest) {
  std::vector<double> v[3];
  for (std::uint64_t r = 0; r < 20; ++r) {
    const Sample s = sample_model(IshigamiHomma{}, {1000, 3, Scheme::latin_hypercube, derive_seed(3, r)});
    for (std::size_t i = 0; i < 3; ++i) v[i].push_back(qdm_global(s, FactorGroup::single(i, 3)));
  }
  EXPECT_LT(median(v[1]), 0.05);
  EXPECT_LT(median(v[1]), median(v[0]));
  EXPECT_LT(median(v[1]), median(v[2]));
}

TEST(QdmNormalized, ShuffledResponseDecouples) {
  std::mt19937_64 rng(10);
  const Matrix x = normals(500, 1, rng);
  const Vector y = x.col(0).array().square().matrix();
  double sum = 0.0;
  for (int t = 0; t < 100; ++t) sum += qdm_index(Variable(x), Variable::column(shuffled(y, rng)));
  EXPECT_LT(sum / 100.0, 0.05);
  EXPECT_GT(qdm_index(Variable(x), Variable::column(y)), 0.2);
}

TEST(QdmNormalized, IndependenceBelowPermutationQuantile) {
  std::mt19937_64 rng(11);
  int below = 0;
  const int runs = 20;
  for (int t = 0; t < runs; ++t) {
    const Matrix x = normals(200, 1, rng);
    const Vector y = normals(200, 1, rng).col(0);
    const double observed = qdm_index(Variable(x), Variable::column(y));
    std::vector<double> null;
    for (int s = 0; s < 100; ++s) null.push_back(qdm_index(Variable(x), Variable::column(shuffled(y, rng))));
    std::sort(null.begin(), null.end());
    if (observed <= null[94]) ++below;
  }
  EXPECT_GE(below, 17);
}

TEST(QdmIndex, StreamingMatchesGram) {
  std::mt19937_64 rng(12);
  const Matrix x = normals(300, 2, rng);
  const Vector y = (x.col(0).array() * x.col(1).array()).matrix() + 0.3 * normals(300, 1, rng).col(0);
  const Vector w = uniforms(300, rng);
  QdmOptions gram_path, stream_path;
  stream_path.streaming_threshold = 10;
  EXPECT_NEAR(qdm_index(Variable(x), Variable::column(y), w, gram_path),
              qdm_index(Variable(x), Variable::column(y), w, stream_path), 1e-12);
}

TEST(QdmIndex, MixedVariableMatchesProductKernel) {
  std::mt19937_64 rng(13);
  Matrix m(40, 2);
  m.col(0) = normals(40, 1, rng).col(0);
  for (Eigen::Index i = 0; i < 40; ++i) m(i, 1) = static_cast<double>(i % 3);
  const Variable mixed(m, {ColumnKind::continuous, ColumnKind::categorical});
  const Vector y = normals(40, 1, rng).col(0) + m.col(1);
  const double sigma_x = 0.8, sigma_y = 1.1;
  QdmOptions opts;
  opts.kernel_x = GaussianKernel{sigma_x};
  opts.kernel_y = GaussianKernel{sigma_y};
  Matrix kx = gaussian_gram(m.col(0), sigma_x);
  for (Eigen::Index i = 0; i < 40; ++i)
    for (Eigen::Index j = 0; j < 40; ++j)
      if (m(i, 1) != m(j, 1)) kx(i, j) = 0.0;
  const Matrix ky = gaussian_gram(y, sigma_y);
  const double expected = qdm_oracle(kx, ky, Vector::Ones(40)) /
                          std::sqrt(qdm_oracle(kx, kx, Vector::Ones(40)) * qdm_oracle(ky, ky, Vector::Ones(40)));
  EXPECT_NEAR(qdm_index(mixed, Variable::column(y), opts), expected, 1e-12);
}

TEST(QdmTarget, ConstantTransformRejected) {
  const Sample s = sample_model(IshigamiHomma{}, {100, 3, Scheme::latin_hypercube, 1});
  EXPECT_THROW(qdm_target(s, FactorGroup::single(0, 3), ConstantWeight{}), Error);
  EXPECT_THROW(qdm_target(s, FactorGroup::single(0, 3), IndicatorExceedance{1e9}), Error);
}

TEST(QdmTarget, IndicatorUsesCategoricalKernel) {
  const Sample s = sample_model(IshigamiHomma{}, {300, 3, Scheme::latin_hypercube, 2});
  const Vector y = s.scalar_response();
  const WeightSpec w = IndicatorExceedance{critical_threshold(y, 0.9)};
  const Variable t = Variable::column(weight_eval(w, y), ColumnKind::categorical);
  QdmOptions opts;
  opts.kernel_y = CategoricalKernel{};
  EXPECT_EQ(qdm_target(s, FactorGroup::single(0, 3), w), qdm_index(s.select(FactorGroup::single(0, 3)), t, opts));
}

TEST(QdmTarget, IshigamiSecondFactorLeast) {
  std::vector<double> v[3];
  for (std::uint64_t r = 0; r < 20; ++r) {
    const Sample s = sample_model(IshigamiHomma{}, {1000, 3, Scheme::latin_hypercube, derive_seed(4, r)});
    const WeightSpec w = IndicatorExceedance{critical_threshold(s.scalar_response(), 0.9)};
    for (std::size_t i = 0; i < 3; ++i) v[i].push_back(qdm_target(s, FactorGroup::single(i, 3), w));
  }
  EXPECT_LT(median(v[1]), median(v[0]));
  EXPECT_LT(median(v[1]), median(v[2]));
}

TEST(QdmTarget, MinNormalUniformNormalFirst) {
  std::vector<double> v[2];
  for (std::uint64_t r = 0; r < 20; ++r) {
    const Sample s = sample_model(MinNormalUniform{}, {1000, 2, Scheme::latin_hypercube, derive_seed(5, r)});
    const WeightSpec w = IndicatorExceedance{critical_threshold(s.scalar_response(), 0.9)};
    for (std::size_t i = 0; i < 2; ++i) v[i].push_back(qdm_target(s, FactorGroup::single(i, 2), w));
  }
  EXPECT_GT(median(v[0]), median(v[1]));
}

TEST(QdmConditional, UnitWeightBitwiseGlobal) {
  const Sample s = sample_model(IshigamiHomma{}, {200, 3, Scheme::latin_hypercube, 6});
  for (std::size_t i = 0; i < 3; ++i) {
    const FactorGroup g = FactorGroup::single(i, 3);
    EXPECT_EQ(qdm_conditional(s, g, ConstantWeight{}), qdm_global(s, g));
    EXPECT_EQ(qdm_conditional(s, g, IndicatorExceedance{-1e9}), qdm_global(s, g));
  }
}

TEST(QdmConditional, ZeroMassRejected) {
  const Sample s = sample_model(IshigamiHomma{}, {50, 3, Scheme::latin_hypercube, 6});
  EXPECT_THROW(qdm_conditional(s, FactorGroup::single(0, 3), IndicatorExceedance{1e9}), Error);
}

TEST(QdmConditional, MinNormalUniformUniformFirst) {
  std::vector<double> v[2];
  for (std::uint64_t r = 0; r < 20; ++r) {
    const Sample s = sample_model(MinNormalUniform{}, {1000, 2, Scheme::latin_hypercube, derive_seed(7, r)});
    const WeightSpec w = IndicatorExceedance{critical_threshold(s.scalar_response(), 0.9)};
    for (std::size_t i = 0; i < 2; ++i) v[i].push_back(qdm_conditional(s, FactorGroup::single(i, 2), w));
  }
  EXPECT_GT(median(v[1]), median(v[0]));
}

TEST(QdmConditional, IshigamiThirdFactorGainsWeight) {
  // Conditioning on the upper decile moves weight towards X3; mutual information
  // makes it dominant, the kernel measure only raises its share.
  std::vector<double> v[3], g[3];
  for (std::uint64_t r = 0; r < 20; ++r) {
    const Sample s = sample_model(IshigamiHomma{}, {1000, 3, Scheme::latin_hypercube, derive_seed(8, r)});
    const WeightSpec w = IndicatorExceedance{critical_threshold(s.scalar_response(), 0.9)};
    for (std::size_t i = 0; i < 3; ++i) {
      v[i].push_back(qdm_conditional(s, FactorGroup::single(i, 3), w));
      g[i].push_back(qdm_global(s, FactorGroup::single(i, 3)));
    }
  }
  EXPECT_GT(median(v[2]), median(v[1]));
  EXPECT_GT(median(v[2]) / median(v[0]), median(g[2]) / median(g[0]));
}

TEST(QdmHybrid, UnitWeightIsPlain) {
  std::mt19937_64 rng(14);
  const GramMatrix gx = gram(GaussianKernel{1.0}, Variable(normals(30, 1, rng)));
  const GramMatrix gy = gram(GaussianKernel{1.0}, Variable(normals(30, 1, rng)));
  EXPECT_EQ(qdm_hybrid(gx, gy, Vector::Ones(30)), qdm(gx, gy));
  EXPECT_EQ(qdm_hybrid(gx, gy, Vector::Zero(30)), 0.0);
  EXPECT_THROW(qdm_hybrid(gx, gy, Vector::Constant(30, 1.5)), Error);
}

TEST(QdmHybrid, MatchesExpectationForm) {
  // Five points; kY^w(y, y') = w(y) w(y') kY(y, y'). The three expectations
  // E[kX kY^w] + E[kX] E[kY^w] - 2 E_i[E_j kX(i, j) E_l kY^w(i, l)] by brute force.
  Matrix x(5, 1), y(5, 1);
  x << 0.1, 0.7, 0.3, 0.9, 0.5;
  y << 1.0, 2.5, 0.2, 3.1, 2.9;
  const Vector w = weight_eval(IndicatorExceedance{2.5}, y.col(0));
  const GramMatrix gx = gram(GaussianKernel{0.4}, Variable(x));
  const GramMatrix gy = gram(GaussianKernel{1.0}, Variable(y));
  double t1 = 0, ex = 0, ey = 0, t3 = 0;
  for (int i = 0; i < 5; ++i) {
    double rx = 0, ry = 0;
    for (int j = 0; j < 5; ++j) {
      const double kyw = w[i] * w[j] * gy.values(i, j);
      t1 += gx.values(i, j) * kyw / 25.0;
      ex += gx.values(i, j) / 25.0;
      ey += kyw / 25.0;
      rx += gx.values(i, j) / 5.0;
      ry += kyw / 5.0;
    }
    t3 += rx * ry / 5.0;
  }
  EXPECT_NEAR(qdm_hybrid(gx, gy, w), t1 + ex * ey - 2.0 * t3, 1e-14);
}
