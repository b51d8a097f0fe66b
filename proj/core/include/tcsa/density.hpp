#ifndef TCSA_DENSITY_HPP
#define TCSA_DENSITY_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tcsa/types.hpp"

namespace tcsa {

/// Gaussian kernel density with a diagonal Silverman bandwidth.
struct GaussianKde {};
/// Nearest-neighbor density on copula data in [0,1]^q, L-infinity balls
/// truncated to the unit cube. Unset k means ceil(n^(4/5)).
struct KnnCopula {
  std::optional<std::size_t> k;
};

using DensitySpec = std::variant<GaussianKde, KnnCopula>;

std::string to_string(const DensitySpec& spec);

/// Kish effective size (sum w)^2 / sum w^2.
double effective_size(const Vector& weights);

/// ceil(n^(4/5)), kept below n when n > 1.
std::size_t default_neighbors(double n);

/// h_j = sigma_j (4 / ((q + 2) n))^(1 / (q + 4)) with weighted sigma_j and
/// effective n.
Vector silverman_bandwidth(const Matrix& points, const Vector& weights);

/// Weighted mixture of diagonal Gaussian kernels at each row of eval_at.
Vector kde_density(const Matrix& points, const Matrix& eval_at);
Vector kde_density(const Matrix& points, const Matrix& eval_at, const Vector& weights);

/// Weight fraction inside the smallest ball holding k units of weight, over
/// the ball volume clipped to the unit cube. Weights are rescaled to sum to
/// the effective size.
Vector knn_copula_density(const Matrix& points, const Matrix& eval_at, std::size_t k);
Vector knn_copula_density(const Matrix& points, const Matrix& eval_at, std::size_t k, const Vector& weights);

/// Density of a variable with mixed column kinds: the weighted frequency of
/// the categorical cell times a continuous density fitted inside that cell.
/// Cells never observed get density zero.
class DensityModel {
 public:
  DensityModel(const Variable& points, const DensitySpec& spec, const Vector& weights);

  /// Density at each row of eval_at, columns laid out as in the fit data.
  Vector evaluate(const Matrix& eval_at) const;

 private:
  struct Cell {
    double mass = 0.0;
    Matrix points;  // continuous columns of rows in the cell
    Vector weights;
    Vector bandwidth;  // KDE only
    std::size_t k = 0;  // kNN only
  };

  DensitySpec spec_;
  std::vector<Eigen::Index> continuous_;
  std::vector<Eigen::Index> categorical_;
  std::map<std::vector<double>, Cell> cells_;
};

}  // namespace tcsa

#endif  // TCSA_DENSITY_HPP
