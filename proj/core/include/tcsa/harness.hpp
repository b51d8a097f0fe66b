#ifndef TCSA_HARNESS_HPP
#define TCSA_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcsa/csiszar.hpp"
#include "tcsa/designs.hpp"
#include "tcsa/models.hpp"
#include "tcsa/sample.hpp"

namespace tcsa {

enum class MeasureId { pf, rmc_eta, qdm, qdm_copula, mi_kde, mi_knn, rmc, cdm_full };

std::string_view to_string(MeasureId id);
MeasureId parse_measure_id(std::string_view text);

/// One sensitivity measure: estimator, analysis mode, order, and options.
struct MeasureSpec {
  MeasureId id = MeasureId::pf;
  Mode mode = Mode::global;
  Order order = Order::first;
  /// Random-feature scale for rmc and rmc-eta.
  double gamma = 1.0;
  /// Random-feature count; ceil(sqrt(n)) when unset.
  std::optional<std::size_t> features;
  /// Divergence for the Csiszar measures.
  std::string phi = "reverse-kl";

  /// "id/mode/order", the key results are grouped by.
  std::string label() const;
};

/// Throws for combinations without a defined estimator, such as conditional
/// pick-and-freeze.
void validate(const MeasureSpec& spec);

/// "table1", "table2", "table3" or "ratio".
std::vector<MeasureSpec> measure_suite(std::string_view name);

/// Critical domain {y >= c} with c the empirical quantile at `level` of the
/// repetition's own response.
struct WeightChoice {
  enum class Kind { indicator, smooth };
  Kind kind = Kind::indicator;
  double level = 0.9;
  /// s in exp(-max(c - y, 0) / (s sigma_Y)).
  double smoothing = 0.2;
};

WeightChoice::Kind parse_weight_kind(std::string_view text);
std::string_view to_string(WeightChoice::Kind kind);

/// Threshold and dispersion estimated from the given response.
WeightSpec make_weight(const WeightChoice& choice, const Vector& response);

struct ExperimentConfig {
  ModelSpec model = SobolG{};
  std::vector<MeasureSpec> measures;
  std::vector<std::size_t> sizes{1000};
  std::size_t repetitions = 100;
  WeightChoice weight;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::latin_hypercube;
};

void validate(const ExperimentConfig& config);

inline constexpr std::string_view kResultSchema = "tcsa.result/1";

struct SensitivityResult {
  std::string measure;  // MeasureSpec::label()
  MeasureId id = MeasureId::pf;
  Mode mode = Mode::global;
  Order order = Order::first;
  std::string group;
  double value = 0.0;
  std::size_t n = 0;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  /// Estimate fell outside [0, 1] and is reported unclamped.
  bool out_of_range = false;
  /// Debias result was clamped into [0, 1].
  bool clamped = false;
  /// Normalization was unavailable; value is NaN.
  bool unavailable = false;
  /// Nonempty when the estimate failed; value is NaN.
  std::string failure;

  bool ok() const { return failure.empty() && !unavailable; }
};

/// Per-repetition context shared by every measure and factor group.
struct AnalysisContext {
  Sample sample;
  /// Model and base design for pick-and-freeze; absent for external data.
  std::optional<ModelSpec> model;
  std::optional<Matrix> base;
  WeightSpec weight = ConstantWeight{};
  /// Why the weight could not be built; non-global measures then fail.
  std::string weight_error;
  /// Seed of the random features drawn for this analysis.
  std::uint64_t feature_seed = 0;
};

/// One measure on one factor group. Estimation failures are returned as
/// flagged records rather than thrown.
SensitivityResult evaluate_measure(const MeasureSpec& spec, const AnalysisContext& context, const FactorGroup& group);

/// Every measure on every single factor, for every size and repetition.
/// Deterministic in the master seed.
std::vector<SensitivityResult> run_experiment(const ExperimentConfig& config);

/// Measures on one external sample; pick-and-freeze is rejected because it
/// needs its own design.
std::vector<SensitivityResult> measure_sample(const Sample& sample, const std::vector<MeasureSpec>& measures,
                                              const WeightChoice& weight, std::uint64_t seed,
                                              std::optional<WeightSpec> fixed_weight = std::nullopt);

/// Share of repetitions whose values, sorted in decreasing order, follow the
/// reference ranking of group labels exactly. Ties and failures count as
/// misses.
double ordering_proportion(const std::vector<SensitivityResult>& results, const std::string& measure, std::size_t n,
                           const std::vector<std::string>& ranking);

struct ReferenceValue {
  std::string measure;
  std::string group;
  double median = 0.0;
  std::size_t n = 0;
  std::size_t repetitions = 0;
  /// Repetitions that produced no value.
  std::size_t failures = 0;
};

/// Per-group medians of the configured suite at a large sample size.
std::vector<ReferenceValue> asymptotic_reference(const ExperimentConfig& config, std::size_t n_ref = 10000,
                                                 std::size_t reps = 10);

struct SummaryRow {
  std::string measure;
  std::string group;
  std::size_t n = 0;
  FiveNumberSummary box;
  std::size_t failures = 0;
  /// Set on the first group row of a measure when a ranking was given.
  std::optional<double> ordering;
};

/// Box-plot statistics per (measure, group, n); orderings for every measure
/// when a reference ranking is supplied.
std::vector<SummaryRow> summarize(const std::vector<SensitivityResult>& results,
                                  const std::optional<std::vector<std::string>>& ranking = std::nullopt);

}  // namespace tcsa

#endif  // TCSA_HARNESS_HPP
