#ifndef TCSA_DESIGNS_HPP
#define TCSA_DESIGNS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tcsa/types.hpp"

namespace tcsa {

struct UniformMarginal {
  double lower = 0.0;
  double upper = 1.0;
};
struct StandardNormalMarginal {};
using Marginal = std::variant<UniformMarginal, StandardNormalMarginal>;

/// Accepts "uniform", "uniform(a,b)", "normal" and "standard_normal".
Marginal parse_marginal(std::string_view text);
std::string to_string(const Marginal& marginal);
/// Inverse CDF of the marginal at u in [0, 1].
double quantile(const Marginal& marginal, double u);

enum class Scheme { pseudo_random, latin_hypercube };
Scheme parse_scheme(std::string_view text);
std::string_view to_string(Scheme scheme);

struct DesignSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  Scheme scheme = Scheme::latin_hypercube;
  std::uint64_t seed = 0;
  /// One entry per factor, or a single entry shared by all factors.
  std::vector<Marginal> marginals{UniformMarginal{}};
};

/// n x d factor matrix. Latin hypercube puts exactly one point in each of the
/// n equal-probability bins of every margin, jittered uniformly inside the bin.
Matrix generate_design(const DesignSpec& spec);

/// Distinct reproducible stream seed for (master, stream) pairs.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Rows j and n+j of a 2n-row base design combined for the pick-and-freeze
/// estimator: first = row j, second = row n+j with the group columns copied
/// from row j.
struct PickFreezePairs {
  Matrix first;
  Matrix second;
};
PickFreezePairs pick_freeze_pairs(const Matrix& base, const FactorGroup& group);

}  // namespace tcsa

#endif  // TCSA_DESIGNS_HPP
