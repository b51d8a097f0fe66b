#include "tcsa/models.hpp"

#include <cmath>
#include <numbers>

#include "tcsa/correlation_ratio.hpp"

namespace tcsa {

ModelSpec parse_model(std::string_view name) {
  if (name == "sobol-g" || name == "sobol_g") return SobolG{};
  if (name == "ishigami" || name == "ishigami-homma") return IshigamiHomma{};
  if (name == "min-normal-uniform" || name == "minimum-normal-uniform") return MinNormalUniform{};
  throw Error("unknown model '" + std::string(name) + "'");
}

std::string model_name(const ModelSpec& spec) {
  struct Visitor {
    std::string operator()(const SobolG&) const { return "sobol-g"; }
    std::string operator()(const IshigamiHomma&) const { return "ishigami"; }
    std::string operator()(const MinNormalUniform&) const { return "min-normal-uniform"; }
  };
  return std::visit(Visitor{}, spec);
}

std::size_t dimension(const ModelSpec& spec) {
  struct Visitor {
    std::size_t operator()(const SobolG& m) const { return m.a.size(); }
    std::size_t operator()(const IshigamiHomma&) const { return 3; }
    std::size_t operator()(const MinNormalUniform&) const { return 2; }
  };
  return std::visit(Visitor{}, spec);
}

std::vector<Marginal> marginals(const ModelSpec& spec) {
  struct Visitor {
    std::vector<Marginal> operator()(const SobolG& m) const {
      return std::vector<Marginal>(m.a.size(), UniformMarginal{0.0, 1.0});
    }
    std::vector<Marginal> operator()(const IshigamiHomma&) const {
      return std::vector<Marginal>(3, UniformMarginal{-std::numbers::pi, std::numbers::pi});
    }
    std::vector<Marginal> operator()(const MinNormalUniform&) const {
      return {StandardNormalMarginal{}, UniformMarginal{0.0, 1.0}};
    }
  };
  return std::visit(Visitor{}, spec);
}

void validate(const ModelSpec& spec) {
  if (const auto* g = std::get_if<SobolG>(&spec)) {
    if (g->a.empty()) throw Error("Sobol' g needs at least one factor");
    for (double a : g->a)
      if (!(a >= 0.0) || !std::isfinite(a)) throw Error("Sobol' g coefficients must be finite and nonnegative");
  } else if (const auto* ih = std::get_if<IshigamiHomma>(&spec)) {
    if (!std::isfinite(ih->a) || !std::isfinite(ih->b)) throw Error("Ishigami parameters must be finite");
  }
}

double eval_model(const ModelSpec& spec, std::span<const double> x) {
  if (x.size() != dimension(spec)) throw Error("model input dimension mismatch");
  struct Visitor {
    std::span<const double> x;
    double operator()(const SobolG& m) const {
      double y = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) y *= (std::abs(4.0 * x[i] - 2.0) + m.a[i]) / (1.0 + m.a[i]);
      return y;
    }
    double operator()(const IshigamiHomma& m) const {
      const double s2 = std::sin(x[1]);
      const double x3 = x[2] * x[2];
      return std::sin(x[0]) * (1.0 + m.b * x3 * x3) + m.a * s2 * s2;
    }
    double operator()(const MinNormalUniform&) const { return std::min(x[0], x[1]); }
  };
  return std::visit(Visitor{x}, spec);
}

Vector eval_model(const ModelSpec& spec, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != dimension(spec)) throw Error("model input dimension mismatch");
  Vector y(x.rows());
  std::vector<double> row(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) row[static_cast<std::size_t>(j)] = x(i, j);
    y[i] = eval_model(spec, row);
  }
  return y;
}

ReferenceIndices analytic_indices(const ModelSpec& spec) {
  validate(spec);
  ReferenceIndices out;
  out.source = "analytic";
  if (const auto* g = std::get_if<SobolG>(&spec)) {
    std::vector<double> partial;
    double product = 1.0;
    for (double a : g->a) {
      partial.push_back(1.0 / (3.0 * (1.0 + a) * (1.0 + a)));
      product *= 1.0 + partial.back();
    }
    out.mean = 1.0;
    out.variance = product - 1.0;
    for (double v : partial) {
      out.first_order.push_back(v / out.variance);
      out.total_order.push_back(1.0 - (product / (1.0 + v) - 1.0) / out.variance);
    }
    return out;
  }
  if (const auto* ih = std::get_if<IshigamiHomma>(&spec)) {
    constexpr double pi = std::numbers::pi;
    const double pi4 = std::pow(pi, 4);
    const double additive = ih->a * ih->a / 8.0;
    const double main = 0.5 * std::pow(1.0 + ih->b * pi4 / 5.0, 2);
    const double interaction = ih->b * ih->b * 8.0 * std::pow(pi, 8) / 225.0;
    out.mean = ih->a / 2.0;
    out.variance = additive + main + interaction;
    out.first_order = {main / out.variance, additive / out.variance, 0.0};
    out.total_order = {(main + interaction) / out.variance, additive / out.variance, interaction / out.variance};
    return out;
  }
  throw Error("no closed-form indices for " + model_name(spec) + "; use monte_carlo_indices");
}

ReferenceIndices monte_carlo_indices(const ModelSpec& spec, std::size_t pairs, std::uint64_t seed) {
  validate(spec);
  const std::size_t d = dimension(spec);
  DesignSpec design{2 * pairs, d, Scheme::pseudo_random, seed, marginals(spec)};
  const Matrix base = generate_design(design);
  const Vector y_all = eval_model(spec, base);

  ReferenceIndices out;
  out.source = "monte_carlo";
  out.mean = y_all.mean();
  out.variance = (y_all.array() - out.mean).square().mean();
  const Vector y_first = y_all.head(static_cast<Eigen::Index>(pairs));
  for (std::size_t i = 0; i < d; ++i) {
    const FactorGroup group = FactorGroup::single(i, d);
    const auto first = pick_freeze_pairs(base, group);
    out.first_order.push_back(pf_eta_squared(y_first, eval_model(spec, first.second)));
    if (d == 1) {
      out.total_order.push_back(out.first_order.back());
      continue;
    }
    const auto total = pick_freeze_pairs(base, group.complement());
    out.total_order.push_back(pf_total_order(pf_eta_squared(y_first, eval_model(spec, total.second))));
  }
  return out;
}

Sample sample_model(const ModelSpec& spec, DesignSpec design) {
  validate(spec);
  design.d = dimension(spec);
  design.marginals = marginals(spec);
  Matrix x = generate_design(design);
  Vector y = eval_model(spec, x);
  return Sample(std::move(x), Matrix(y));
}

}  // namespace tcsa
