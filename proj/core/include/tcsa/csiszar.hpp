#ifndef TCSA_CSISZAR_HPP
#define TCSA_CSISZAR_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcsa/density.hpp"
#include "tcsa/sample.hpp"
#include "tcsa/types.hpp"

namespace tcsa {

enum class PhiKind { kl, reverse_kl, total_variation, hellinger, pearson, neyman };

/// Convex phi with phi(1) = 0, from a fixed catalog.
struct PhiDivergence {
  PhiKind kind;
  std::string name;
  /// lim_{t->0} t phi(1/t); may be +infinity.
  double phi_star_zero;
  bool strictly_convex_at_1;
  /// phi >= 0 on [0, 1]; required by the support divergence.
  bool nonneg_on_unit;

  /// phi(t) for t >= 0, limits taken at 0; may be +infinity.
  double operator()(double t) const;
  /// t phi(1/t), the role-swapping partner.
  PhiDivergence conjugate() const;
};

PhiDivergence make_phi(PhiKind kind);
/// "kl", "reverse-kl", "tv", "hellinger", "pearson" or "neyman".
PhiDivergence phi_by_name(std::string_view name);
std::vector<PhiDivergence> phi_catalog();

/// Probability masses over labels 0..m-1 of a shared finite universe.
struct DiscreteMeasure {
  std::vector<double> mass;

  explicit DiscreteMeasure(std::vector<double> m);
  /// Rescales nonnegative masses of positive total to sum to one.
  static DiscreteMeasure normalized(std::vector<double> m);
  std::size_t size() const { return mass.size(); }
  double operator[](std::size_t z) const { return mass[z]; }
};

/// sum_{q>0} q phi(p/q) + phi*(0) sum_{q=0} p, with 0 * inf = 0.
double discrete_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q, const PhiDivergence& phi);

/// The same sum with the singular part outside supp(Q) dropped, which on a
/// finite space is all of it.
double discrete_support_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q, const PhiDivergence& phi);

/// P^w: masses rescaled by w and renormalized.
DiscreteMeasure weighted(const DiscreteMeasure& p, const std::vector<double>& w);

/// Divergence between P^w and Q^w.
double discrete_weighted_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q, const std::vector<double>& w,
                                    const PhiDivergence& phi);
double discrete_weighted_support_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q,
                                            const std::vector<double>& w, const PhiDivergence& phi);

/// Image measure under label map f into a universe of the given size.
DiscreteMeasure pushforward(const DiscreteMeasure& p, const std::vector<std::size_t>& f, std::size_t target_size);

/// Product measure; label (a, b) maps to a * q.size() + b.
DiscreteMeasure product(const DiscreteMeasure& p, const DiscreteMeasure& q);

struct CsiszarOptions {
  PhiDivergence phi = make_phi(PhiKind::reverse_kl);
  DensitySpec density = KnnCopula{};
  /// Rank-transform continuous columns first. Nearest-neighbor densities
  /// require it.
  bool copula = true;
  /// Largest n accepted by the O(n^3) full estimator.
  Eigen::Index full_size_limit = 2000;
  /// Self-measures above this count as infinite.
  double self_cap = 1e12;
};

struct CsiszarEstimate {
  double value = 0.0;
  /// Density ratios pushed into [1e-300, 1e300] before phi.
  std::size_t floored = 0;
};

/// Support estimator: weighted mean over observed pairs of
/// phi(p_X p_Y / p_XY).
CsiszarEstimate scdm(const Variable& x, const Variable& y, const CsiszarOptions& options = {});
CsiszarEstimate scdm(const Variable& x, const Variable& y, const Vector& weights, const CsiszarOptions& options = {});

/// Full estimator: weighted mean over all (X_i, Y_j) of phi(p_XY / (p_X p_Y)).
CsiszarEstimate cdm_full(const Variable& x, const Variable& y, const CsiszarOptions& options = {});
CsiszarEstimate cdm_full(const Variable& x, const Variable& y, const Vector& weights,
                         const CsiszarOptions& options = {});

/// raw / self; empty when the self-measure is not positive, not finite, or
/// above the cap.
std::optional<double> cdm_normalized(double raw, double self_measure, double cap = 1e12);

/// Normalized estimate of X against Y, divided by the same estimator on
/// (X, X). Empty when the normalization is unavailable.
std::optional<double> scdm_index(const Variable& x, const Variable& y, const Vector& weights,
                                 const CsiszarOptions& options = {});
std::optional<double> cdm_full_index(const Variable& x, const Variable& y, const Vector& weights,
                                     const CsiszarOptions& options = {});

/// Columns of x followed by the columns of y.
Variable join(const Variable& x, const Variable& y);

}  // namespace tcsa

#endif  // TCSA_CSISZAR_HPP
