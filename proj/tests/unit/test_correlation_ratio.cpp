#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "tcsa/correlation_ratio.hpp"
#include "tcsa/designs.hpp"
#include "tcsa/models.hpp"

using namespace tcsa;

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> eta_reps(const ModelSpec& model, std::size_t n, std::size_t reps, std::size_t factor, Order order,
                             Mode mode = Mode::global, std::optional<double> level = std::nullopt) {
  const std::size_t d = dimension(model);
  std::vector<double> out;
  for (std::size_t r = 0; r < reps; ++r) {
    const Matrix base = generate_design({n, d, Scheme::latin_hypercube, derive_seed(99, r), marginals(model)});
    WeightSpec w = ConstantWeight{};
    if (level) w = IndicatorExceedance{critical_threshold(eval_model(model, base), *level)};
    out.push_back(estimate_eta(model, base, FactorGroup::single(factor, d), order, mode, w).value);
  }
  return out;
}

Vector normal_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = z(rng);
  return v;
}

}  // namespace

TEST(PickFreezeEta, FullDeterminationGivesOne) {
  std::mt19937_64 rng(1);
  const Vector y = normal_vector(100, rng);
  EXPECT_DOUBLE_EQ(pf_eta_squared(y, y), 1.0);
}

TEST(PickFreezeEta, MatchesDirectFormula) {
  std::mt19937_64 rng(2);
  const Vector y = normal_vector(64, rng), yp = normal_vector(64, rng);
  Vector pooled(128);
  pooled << y, yp;
  const double mu = pooled.mean();
  const double v = (pooled.array() - mu).square().mean();
  const double e = y.dot(yp) / 64.0;
  EXPECT_NEAR(pf_eta_squared(y, yp), (e - mu * mu) / v, 1e-13);
}

TEST(PickFreezeEta, Errors) {
  EXPECT_THROW(pf_eta_squared(Vector::Ones(5), Vector::Ones(5)), Error);
  EXPECT_THROW(pf_eta_squared(Vector::Ones(1), Vector::Zero(1)), Error);
  EXPECT_THROW(pf_eta_squared(Vector::Ones(3), Vector::Zero(4)), Error);
}

TEST(PickFreezeEta, AffineInvariance) {
  std::mt19937_64 rng(3);
  const Vector y = normal_vector(200, rng), z = normal_vector(200, rng);
  const Vector yp = 0.6 * y + 0.8 * z;
  const double base = pf_eta_squared(y, yp);
  for (double alpha : {-3.0, 0.5, 17.0}) {
    const Vector a = (alpha * y.array() + 4.0).matrix();
    const Vector b = (alpha * yp.array() + 4.0).matrix();
    EXPECT_NEAR(pf_eta_squared(a, b), base, 1e-10);
  }
}

TEST(PickFreezeEta, IndependentBlocksCenterOnZero) {
  std::mt19937_64 rng(4);
  double sum = 0.0;
  for (int r = 0; r < 200; ++r) sum += pf_eta_squared(normal_vector(500, rng), normal_vector(500, rng));
  EXPECT_NEAR(sum / 200.0, 0.0, 0.03);
}

TEST(PickFreezeEta, IshigamiFirstOrderMedians) {
  const IshigamiHomma m;
  EXPECT_NEAR(median(eta_reps(m, 1000, 100, 0, Order::first)), 0.40, 0.05);
  EXPECT_NEAR(median(eta_reps(m, 1000, 100, 2, Order::first)), 0.0, 0.05);
}

TEST(PickFreezeEta, IshigamiTotalOrderMedians) {
  const IshigamiHomma m;
  EXPECT_NEAR(median(eta_reps(m, 1000, 100, 0, Order::total)), 0.71, 0.06);
  EXPECT_NEAR(median(eta_reps(m, 1000, 100, 1, Order::total)), 0.29, 0.06);
}

TEST(PickFreezeEta, AdditiveModelTotalEqualsFirst) {
  // y = x1 + x2^2 on uniform(-1, 1): no interactions.
  auto f = [](const Matrix& x) -> Vector { return x.col(0) + x.col(1).cwiseAbs2(); };
  std::vector<double> gap0, gap1;
  for (std::uint64_t r = 0; r < 40; ++r) {
    const Matrix base = generate_design({2000, 2, Scheme::pseudo_random, r, {UniformMarginal{-1, 1}}});
    for (std::size_t i = 0; i < 2; ++i) {
      const FactorGroup g = FactorGroup::single(i, 2);
      const auto first = pick_freeze_pairs(base, g);
      const auto comp = pick_freeze_pairs(base, g.complement());
      const double s = pf_eta_squared(f(first.first), f(first.second));
      const double t = pf_total_order(pf_eta_squared(f(comp.first), f(comp.second)));
      (i == 0 ? gap0 : gap1).push_back(t - s);
    }
  }
  EXPECT_NEAR(median(gap0), 0.0, 0.05);
  EXPECT_NEAR(median(gap1), 0.0, 0.05);
}

TEST(PickFreezeEta, TotalOrderOfFullGroupRejected) {
  const Matrix base = generate_design({20, 3, Scheme::pseudo_random, 1, marginals(IshigamiHomma{})});
  EXPECT_THROW(estimate_eta(IshigamiHomma{}, base, FactorGroup({0, 1, 2}, 3), Order::total), Error);
}

TEST(PickFreezeEta, ConditionalModeRejected) {
  const Matrix base = generate_design({20, 3, Scheme::pseudo_random, 1, marginals(IshigamiHomma{})});
  EXPECT_THROW(estimate_eta(IshigamiHomma{}, base, FactorGroup::single(0, 3), Order::first, Mode::conditional,
                            IndicatorExceedance{1.0}),
               Error);
}

TEST(MultidimEta, Examples) {
  const double v1[] = {2.5}, e1[] = {0.3};
  EXPECT_DOUBLE_EQ(multidim_eta_squared(v1, e1), 0.3);
  const double v2[] = {1, 1}, e2[] = {0.2, 0.6};
  EXPECT_DOUBLE_EQ(multidim_eta_squared(v2, e2), 0.4);
  const double v3[] = {1, 3}, e3[] = {0.2, 0.6};
  EXPECT_DOUBLE_EQ(multidim_eta_squared(v3, e3), 0.5);
  const double v0[] = {0, 0};
  EXPECT_THROW(multidim_eta_squared(v0, e2), Error);
}

TEST(MultidimEta, BetweenExtremes) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(5), e(5);
    for (int j = 0; j < 5; ++j) {
      v[j] = u(rng);
      e[j] = u(rng);
    }
    const double m = multidim_eta_squared(v, e);
    EXPECT_GE(m, *std::min_element(e.begin(), e.end()) - 1e-15);
    EXPECT_LE(m, *std::max_element(e.begin(), e.end()) + 1e-15);
  }
}

TEST(TargetEta, ConstantWeightRejected) {
  std::mt19937_64 rng(7);
  const Vector y = normal_vector(50, rng);
  EXPECT_THROW(target_eta(y, y, ConstantWeight{}), Error);
}

TEST(TargetEta, BinaryResponseMatchesGlobal) {
  std::mt19937_64 rng(8);
  std::bernoulli_distribution coin(0.4);
  Vector y(300), yp(300);
  for (Eigen::Index i = 0; i < 300; ++i) {
    y[i] = coin(rng);
    yp[i] = coin(rng) ? y[i] : static_cast<double>(coin(rng));
  }
  EXPECT_EQ(target_eta(y, yp, IndicatorExceedance{1.0}), pf_eta_squared(y, yp));
}

TEST(TargetEta, MinNormalUniformKeepsNormalFirst) {
  const MinNormalUniform m;
  const double n = median(eta_reps(m, 1000, 100, 0, Order::first, Mode::target, 0.9));
  const double u = median(eta_reps(m, 1000, 100, 1, Order::first, Mode::target, 0.9));
  EXPECT_GT(n, u);
}

TEST(HybridEta, UnitWeightBitwiseGlobal) {
  std::mt19937_64 rng(9);
  const Vector y = normal_vector(120, rng), z = normal_vector(120, rng);
  const Vector yp = 0.5 * y + z;
  EXPECT_EQ(hybrid_eta(y, yp, SmoothExceedance{-100.0, 1.0, 1.0}), pf_eta_squared(y, yp));
}

TEST(HybridEta, ReferenceValueIsConditionalMean) {
  std::mt19937_64 rng(10);
  const Vector y = normal_vector(100000, rng);
  const Vector w = weight_eval(IndicatorExceedance{1.0}, y);
  const Vector h = hybrid_transform(y, w);
  // Below-threshold entries all equal y0; E[Z | Z >= 1] = phi(1)/(1 - Phi(1)).
  double y0 = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (w[i] == 0.0) {
      y0 = h[i];
      break;
    }
  EXPECT_NEAR(y0, 0.24197072451914337 / 0.15865525393145707, 0.02);
}

TEST(HybridEta, MinNormalUniformRanksUniformFirst) {
  const MinNormalUniform m;
  const double n = median(eta_reps(m, 1000, 100, 0, Order::first, Mode::hybrid, 0.9));
  const double u = median(eta_reps(m, 1000, 100, 1, Order::first, Mode::hybrid, 0.9));
  EXPECT_GT(u, n);
}
