#include "tcsa/designs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

namespace tcsa {

Marginal parse_marginal(std::string_view text) {
  if (text == "uniform") return UniformMarginal{};
  if (text == "normal" || text == "standard_normal") return StandardNormalMarginal{};
  if (text.starts_with("uniform(") && text.ends_with(")")) {
    std::string inner(text.substr(8, text.size() - 9));
    std::replace(inner.begin(), inner.end(), ',', ' ');
    std::istringstream in(inner);
    UniformMarginal u;
    if (!(in >> u.lower >> u.upper) || !(u.lower < u.upper))
      throw Error("malformed uniform marginal '" + std::string(text) + "'");
    return u;
  }
  throw Error("unsupported marginal '" + std::string(text) + "'");
}

std::string to_string(const Marginal& marginal) {
  if (const auto* u = std::get_if<UniformMarginal>(&marginal)) {
    std::ostringstream out;
    out.precision(17);
    out << "uniform(" << u->lower << ',' << u->upper << ')';
    return out.str();
  }
  return "standard_normal";
}

double quantile(const Marginal& marginal, double u) {
  if (const auto* uni = std::get_if<UniformMarginal>(&marginal)) return uni->lower + (uni->upper - uni->lower) * u;
  // Keep the normal quantile finite at the closed ends of the unit interval.
  constexpr double tiny = std::numeric_limits<double>::min();
  u = std::clamp(u, tiny, 1.0 - std::numeric_limits<double>::epsilon() / 2);
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, u);
}

Scheme parse_scheme(std::string_view text) {
  if (text == "lhs" || text == "latin_hypercube") return Scheme::latin_hypercube;
  if (text == "random" || text == "pseudo_random") return Scheme::pseudo_random;
  throw Error("unknown design scheme '" + std::string(text) + "'");
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::latin_hypercube ? "latin_hypercube" : "pseudo_random";
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over a golden-ratio counter.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix generate_design(const DesignSpec& spec) {
  if (spec.n < 2) throw Error("design needs n >= 2");
  if (spec.d < 1) throw Error("design needs d >= 1");
  if (spec.marginals.size() != 1 && spec.marginals.size() != spec.d)
    throw Error("design needs one marginal per factor or a single shared marginal");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(spec.n);
  Matrix out(n, static_cast<Eigen::Index>(spec.d));
  std::vector<std::size_t> bins(spec.n);

  for (std::size_t j = 0; j < spec.d; ++j) {
    const Marginal& marginal = spec.marginals.size() == 1 ? spec.marginals.front() : spec.marginals[j];
    const auto col = static_cast<Eigen::Index>(j);
    if (spec.scheme == Scheme::latin_hypercube) {
      std::iota(bins.begin(), bins.end(), std::size_t{0});
      std::shuffle(bins.begin(), bins.end(), rng);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double u = (static_cast<double>(bins[static_cast<std::size_t>(i)]) + unit(rng)) / static_cast<double>(n);
        out(i, col) = quantile(marginal, u);
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i) out(i, col) = quantile(marginal, unit(rng));
    }
  }
  return out;
}

PickFreezePairs pick_freeze_pairs(const Matrix& base, const FactorGroup& group) {
  if (base.rows() % 2 != 0) throw Error("pick-and-freeze base design needs an even row count");
  if (base.rows() == 0) throw Error("pick-and-freeze base design is empty");
  if (static_cast<Eigen::Index>(group.dimension()) != base.cols())
    throw Error("factor group dimension differs from design");
  const Eigen::Index half = base.rows() / 2;
  PickFreezePairs pairs{base.topRows(half), base.bottomRows(half)};
  for (std::size_t j : group.indices()) {
    const auto col = static_cast<Eigen::Index>(j);
    pairs.second.col(col) = pairs.first.col(col);
  }
  return pairs;
}

}  // namespace tcsa
