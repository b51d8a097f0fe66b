#ifndef TCSA_MODELS_HPP
#define TCSA_MODELS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tcsa/designs.hpp"
#include "tcsa/sample.hpp"

namespace tcsa {

/// prod_i (|4 x_i - 2| + a_i) / (1 + a_i) on [0,1]^d.
struct SobolG {
  std::vector<double> a{0.0, 1.0, 9.0, 99.0};
};
/// sin(x1) + a sin^2(x2) + b x3^4 sin(x1) on [-pi,pi]^3.
struct IshigamiHomma {
  double a = 5.0;
  double b = 0.1;
};
/// min(N, U) with N standard normal and U uniform on [0,1].
struct MinNormalUniform {};

using ModelSpec = std::variant<SobolG, IshigamiHomma, MinNormalUniform>;

/// "sobol-g", "ishigami" or "min-normal-uniform" with default parameters.
ModelSpec parse_model(std::string_view name);
std::string model_name(const ModelSpec& spec);
std::size_t dimension(const ModelSpec& spec);
std::vector<Marginal> marginals(const ModelSpec& spec);
void validate(const ModelSpec& spec);

double eval_model(const ModelSpec& spec, std::span<const double> x);
/// Row-wise evaluation of an n x d factor matrix.
Vector eval_model(const ModelSpec& spec, const Matrix& x);

struct ReferenceIndices {
  std::vector<double> first_order;
  std::vector<double> total_order;
  double mean = 0.0;
  double variance = 0.0;
  /// "analytic" or "monte_carlo".
  std::string source;
};

/// Closed-form correlation ratios; MinNormalUniform has none and throws.
ReferenceIndices analytic_indices(const ModelSpec& spec);

/// Brute-force reference from a large pick-and-freeze run, for models with no
/// closed form.
ReferenceIndices monte_carlo_indices(const ModelSpec& spec, std::size_t pairs = 1'000'000,
                                     std::uint64_t seed = 20'170'101);

/// Design drawn through the model's own marginals, then evaluated.
Sample sample_model(const ModelSpec& spec, DesignSpec design);

}  // namespace tcsa

#endif  // TCSA_MODELS_HPP
