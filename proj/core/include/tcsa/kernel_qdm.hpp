#ifndef TCSA_KERNEL_QDM_HPP
#define TCSA_KERNEL_QDM_HPP

#include <optional>
#include <string>
#include <variant>

#include "tcsa/sample.hpp"
#include "tcsa/types.hpp"

namespace tcsa {

/// exp(-|x - x'|^2 / (2 sigma^2)) on the continuous columns, times the
/// categorical indicator on any categorical columns. An unset bandwidth means
/// the median heuristic.
struct GaussianKernel {
  std::optional<double> bandwidth;
};
/// 1 when rows agree on every column, else 0.
struct CategoricalKernel {};
/// (|x| + |x'|) / 2 - |x - x'|.
struct DistanceCovarianceKernel {};

using KernelSpec = std::variant<GaussianKernel, CategoricalKernel, DistanceCovarianceKernel>;

std::string to_string(const KernelSpec& kernel);

/// Categorical for all-categorical data, Gaussian otherwise.
KernelSpec default_kernel(const Variable& data);

/// Median of pairwise Euclidean distances over the continuous columns.
/// Samples above the exact-median limit use their leading rows.
double resolve_bandwidth(const Variable& data);
/// Weighted median over pairs i < j weighted by w_i w_j.
double resolve_bandwidth(const Variable& data, const Vector& weights);

/// Fills in a median-heuristic bandwidth; other kernels are returned as is.
KernelSpec resolve(const KernelSpec& kernel, const Variable& data, const Vector& weights);

struct GramMatrix {
  Matrix values;
  KernelSpec kernel;
};

/// Exactly symmetric n x n Gram matrix. The kernel must be resolved.
GramMatrix gram(const KernelSpec& kernel, const Variable& data);

/// Centered double sum with normalized weights; uniform when omitted.
double qdm(const GramMatrix& gx, const GramMatrix& gy);
double qdm(const GramMatrix& gx, const GramMatrix& gy, const Vector& weights);

/// qdm(X, Y) / sqrt(qdm(X, X) qdm(Y, Y)).
double qdm_normalized(const GramMatrix& gx, const GramMatrix& gy);
double qdm_normalized(const GramMatrix& gx, const GramMatrix& gy, const Vector& weights);

/// Unweighted qdm with the response kernel replaced by K_ij w_i w_j.
double qdm_hybrid(const GramMatrix& gx, const GramMatrix& gy, const Vector& w_values);

struct QdmOptions {
  std::optional<KernelSpec> kernel_x;  // default_kernel when unset
  std::optional<KernelSpec> kernel_y;
  /// Rank-transform continuous columns first (weighted under weights).
  bool copula = false;
  /// Above this many rows Gram matrices are not stored.
  Eigen::Index streaming_threshold = 4000;
};

/// Normalized measure between two variables under optional observation
/// weights; bandwidths and copula transforms follow the weights.
double qdm_index(const Variable& x, const Variable& y, const QdmOptions& options = {});
double qdm_index(const Variable& x, const Variable& y, const Vector& weights, const QdmOptions& options = {});

double qdm_global(const Sample& sample, const FactorGroup& group, const QdmOptions& options = {});

/// Measure between X_I and w(Y); an indicator weight gets the categorical
/// kernel on w(Y), a smooth one the Gaussian kernel.
double qdm_target(const Sample& sample, const FactorGroup& group, const WeightSpec& weight,
                  const QdmOptions& options = {});

/// Measure under the weighted probability with weights w(Y).
double qdm_conditional(const Sample& sample, const FactorGroup& group, const WeightSpec& weight,
                       const QdmOptions& options = {});

}  // namespace tcsa

#endif  // TCSA_KERNEL_QDM_HPP
