#ifndef TCSA_SAMPLE_HPP
#define TCSA_SAMPLE_HPP

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tcsa/types.hpp"

namespace tcsa {

/// n observations of d factors and a p-dimensional response. All entries
/// must be finite.
class Sample {
 public:
  Sample(Matrix factors, Matrix response, std::vector<ColumnKind> factor_kinds = {},
         std::vector<std::string> factor_names = {}, std::vector<std::string> response_names = {});

  Eigen::Index n() const { return factors_.rows(); }
  Eigen::Index d() const { return factors_.cols(); }
  Eigen::Index p() const { return response_.cols(); }

  const Matrix& factors() const { return factors_; }
  const Matrix& response() const { return response_; }
  const std::vector<ColumnKind>& factor_kinds() const { return factor_kinds_; }
  const std::vector<std::string>& factor_names() const { return factor_names_; }
  const std::vector<std::string>& response_names() const { return response_names_; }

  Variable select(const FactorGroup& group) const;
  Variable response_variable() const;
  /// First response column; throws when p > 1.
  Vector scalar_response() const;

 private:
  Matrix factors_;
  Matrix response_;
  std::vector<ColumnKind> factor_kinds_;
  std::vector<std::string> factor_names_;
  std::vector<std::string> response_names_;
};

struct ConstantWeight {};
/// 1 iff y >= threshold.
struct IndicatorExceedance {
  double threshold;
};
/// exp(-max(threshold - y, 0) / (smoothing * dispersion)).
struct SmoothExceedance {
  double threshold;
  double smoothing;
  double dispersion;
};
using WeightSpec = std::variant<ConstantWeight, IndicatorExceedance, SmoothExceedance>;

void validate(const WeightSpec& spec);
bool is_binary(const WeightSpec& spec);
double weight_eval(const WeightSpec& spec, double y);
Vector weight_eval(const WeightSpec& spec, const Vector& y);

/// Observations paired with nonnegative weights of positive total.
struct WeightedSample {
  WeightedSample(Sample s, Vector w);
  Sample sample;
  Vector weights;
};

/// Lower empirical order statistic at 1-based index ceil(level * n).
double critical_threshold(std::span<const double> response, double level);
double critical_threshold(const Vector& response, double level);

/// out[i] = sum_j w_j 1{v_j <= v_i} / sum_j w_j. The maximum maps to exactly 1.
Vector empirical_cdf_transform(const Vector& values);
Vector empirical_cdf_transform(const Vector& values, const Vector& weights);

/// Per-column empirical CDF of continuous columns; categorical columns are
/// rejected.
Matrix copula_transform(const Variable& data);
Matrix copula_transform(const Variable& data, const Vector& weights);
/// Copula transform of the continuous columns only; categorical columns pass
/// through unchanged.
Variable copula_continuous(const Variable& data, const Vector& weights);
Matrix copula_transform(const Sample& sample, std::span<const std::size_t> columns);
Matrix copula_transform(const Sample& sample, std::span<const std::size_t> columns, const Vector& weights);

/// w*y + (1-w)*y0 with y0 the weighted mean of y.
Vector hybrid_transform(const Vector& response, const Vector& weights);

struct Moments {
  Vector mean;
  Matrix covariance;  // population convention
};
Moments weighted_moments(const Matrix& values);
Moments weighted_moments(const Matrix& values, const Vector& weights);

/// Population standard deviation of a scalar response.
double dispersion(const Vector& values);

struct FiveNumberSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double lower_whisker = 0, upper_whisker = 0;
  std::vector<double> outliers;
  std::size_t count = 0;
};
/// Tukey hinges; whiskers reach the most extreme points within 1.5 IQR.
FiveNumberSummary five_number_summary(std::span<const double> values);

}  // namespace tcsa

#endif  // TCSA_SAMPLE_HPP
