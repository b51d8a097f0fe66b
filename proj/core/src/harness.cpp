#include "tcsa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "tcsa/correlation_ratio.hpp"
#include "tcsa/kernel_qdm.hpp"
#include "tcsa/rmc.hpp"

namespace tcsa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Feature scale for the correlation-ratio mode: copula-scale factors need
// frequencies of a few periods over [0, 1] to resolve trigonometric models.
constexpr double kEtaGamma = 6.0;

bool is_csiszar(MeasureId id) { return id == MeasureId::mi_kde || id == MeasureId::mi_knn || id == MeasureId::cdm_full; }

CsiszarOptions csiszar_options(const MeasureSpec& spec) {
  CsiszarOptions opts;
  opts.phi = phi_by_name(spec.phi);
  if (spec.id == MeasureId::mi_knn) {
    opts.density = KnnCopula{};
    opts.copula = true;
  } else {
    opts.density = GaussianKde{};
    opts.copula = false;
  }
  return opts;
}

RmcConfig rmc_config(const MeasureSpec& spec, std::uint64_t feature_seed) {
  RmcConfig cfg;
  cfg.features_x = FeatureFamily{FeatureKind::sine, spec.features, spec.gamma, derive_seed(feature_seed, 1)};
  cfg.features_y = FeatureFamily{FeatureKind::sine, spec.features, spec.gamma, derive_seed(feature_seed, 2)};
  return cfg;
}

// w(Y) as a variable: categorical for an indicator weight.
Variable target_variable(const WeightSpec& weight, const Vector& y) {
  const Vector wy = weight_eval(weight, y);
  if (wy.maxCoeff() == wy.minCoeff()) throw Error("transformed response w(Y) is constant");
  return Variable::column(wy, is_binary(weight) ? ColumnKind::categorical : ColumnKind::continuous);
}

double apply_order(Order order, double value) { return order == Order::first ? value : 1.0 - value; }

double median_of(std::vector<double> values) {
  if (values.empty()) return kNaN;
  return five_number_summary(values).median;
}

}  // namespace

std::string_view to_string(MeasureId id) {
  switch (id) {
    case MeasureId::pf: return "pf";
    case MeasureId::rmc_eta: return "rmc-eta";
    case MeasureId::qdm: return "qdm";
    case MeasureId::qdm_copula: return "qdm-copula";
    case MeasureId::mi_kde: return "mi-kde";
    case MeasureId::mi_knn: return "mi-knn";
    case MeasureId::rmc: return "rmc";
    case MeasureId::cdm_full: return "cdm-full";
  }
  return "pf";
}

MeasureId parse_measure_id(std::string_view text) {
  for (MeasureId id : {MeasureId::pf, MeasureId::rmc_eta, MeasureId::qdm, MeasureId::qdm_copula, MeasureId::mi_kde,
                       MeasureId::mi_knn, MeasureId::rmc, MeasureId::cdm_full})
    if (to_string(id) == text) return id;
  throw Error("unknown measure '" + std::string(text) + "'");
}

std::string MeasureSpec::label() const {
  return std::string(to_string(id)) + "/" + std::string(to_string(mode)) + "/" + std::string(to_string(order));
}

void validate(const MeasureSpec& spec) {
  if (spec.id == MeasureId::pf && spec.mode == Mode::conditional)
    throw Error("pick-and-freeze has no conditional version: weighting makes the factors dependent; "
                "use rmc-eta or the hybrid mode");
  if (spec.mode == Mode::hybrid && spec.id != MeasureId::pf && spec.id != MeasureId::rmc_eta)
    throw Error("hybrid mode is defined only for the correlation-ratio measures pf and rmc-eta");
  if (!(spec.gamma > 0.0)) throw Error("feature scale gamma must be positive");
  if (spec.features && *spec.features < 1) throw Error("feature count must be positive");
  if (is_csiszar(spec.id)) {
    const PhiDivergence phi = phi_by_name(spec.phi);
    if (!phi.nonneg_on_unit) throw Error("normalized divergence measures need phi nonnegative on [0, 1]");
  }
}

std::vector<MeasureSpec> measure_suite(std::string_view name) {
  std::vector<MeasureSpec> out;
  auto both_orders = [&](MeasureId id, double gamma = 1.0) {
    for (Order order : {Order::first, Order::total}) {
      MeasureSpec m{id, Mode::global, order};
      m.gamma = gamma;
      out.push_back(m);
    }
  };
  if (name == "table1" || name == "table2") {
    both_orders(MeasureId::pf);
    both_orders(MeasureId::qdm);
    both_orders(MeasureId::mi_kde);
    both_orders(MeasureId::rmc);
    if (name == "table2") {
      both_orders(MeasureId::qdm_copula);
      both_orders(MeasureId::mi_knn);
      both_orders(MeasureId::rmc_eta, kEtaGamma);
    }
    return out;
  }
  if (name == "ratio") {
    both_orders(MeasureId::pf);
    both_orders(MeasureId::rmc_eta, kEtaGamma);
    return out;
  }
  if (name == "table3") {
    for (Mode mode : {Mode::global, Mode::target, Mode::hybrid}) out.push_back({MeasureId::pf, mode, Order::first});
    for (MeasureId id : {MeasureId::qdm, MeasureId::mi_knn})
      for (Mode mode : {Mode::global, Mode::target, Mode::conditional}) out.push_back({id, mode, Order::first});
    return out;
  }
  throw Error("unknown measure suite '" + std::string(name) + "'");
}

WeightChoice::Kind parse_weight_kind(std::string_view text) {
  if (text == "indicator" || text == "binary") return WeightChoice::Kind::indicator;
  if (text == "smooth") return WeightChoice::Kind::smooth;
  throw Error("unknown weight kind '" + std::string(text) + "'");
}

std::string_view to_string(WeightChoice::Kind kind) {
  return kind == WeightChoice::Kind::indicator ? "indicator" : "smooth";
}

WeightSpec make_weight(const WeightChoice& choice, const Vector& response) {
  if (!(choice.level > 0.0 && choice.level < 1.0)) throw Error("quantile level must lie in (0, 1)");
  const double c = critical_threshold(response, choice.level);
  if (choice.kind == WeightChoice::Kind::indicator) return IndicatorExceedance{c};
  const WeightSpec spec = SmoothExceedance{c, choice.smoothing, dispersion(response)};
  validate(spec);
  return spec;
}

void validate(const ExperimentConfig& config) {
  tcsa::validate(config.model);
  if (config.measures.empty()) throw Error("experiment needs at least one measure");
  if (config.sizes.empty()) throw Error("experiment needs at least one sample size");
  if (config.repetitions < 1) throw Error("experiment needs at least one repetition");
  for (const MeasureSpec& m : config.measures) validate(m);
  for (std::size_t n : config.sizes)
    if (n < 2) throw Error("sample sizes must be at least 2");
}

SensitivityResult evaluate_measure(const MeasureSpec& spec, const AnalysisContext& context, const FactorGroup& group) {
  SensitivityResult r;
  r.measure = spec.label();
  r.id = spec.id;
  r.mode = spec.mode;
  r.order = spec.order;
  r.group = group.label();
  r.n = static_cast<std::size_t>(context.sample.n());
  try {
    validate(spec);
    if (spec.mode != Mode::global && !context.weight_error.empty())
      throw Error("weight unavailable: " + context.weight_error);
    const Sample& s = context.sample;
    const FactorGroup measured = spec.order == Order::first ? group : group.complement();
    const Vector y = s.scalar_response();
    const Variable x = s.select(measured);
    const Vector ones = Vector::Ones(s.n());

    double value = 0.0;
    switch (spec.id) {
      case MeasureId::pf: {
        if (!context.model || !context.base) throw Error("pick-and-freeze needs a model-driven design");
        const EtaEstimate eta = estimate_eta(*context.model, *context.base, group, spec.order, spec.mode, context.weight);
        r.value = eta.value;
        r.out_of_range = eta.out_of_range;
        return r;
      }
      case MeasureId::qdm:
      case MeasureId::qdm_copula: {
        QdmOptions opts;
        opts.copula = spec.id == MeasureId::qdm_copula;
        if (spec.mode == Mode::global) value = qdm_index(x, s.response_variable(), ones, opts);
        else if (spec.mode == Mode::target) value = qdm_target(s, measured, context.weight, opts);
        else value = qdm_conditional(s, measured, context.weight, opts);
        break;
      }
      case MeasureId::mi_kde:
      case MeasureId::mi_knn:
      case MeasureId::cdm_full: {
        const CsiszarOptions opts = csiszar_options(spec);
        const Variable target = spec.mode == Mode::target ? target_variable(context.weight, y) : s.response_variable();
        const Vector w = spec.mode == Mode::conditional ? weight_eval(context.weight, y) : ones;
        const std::optional<double> v =
            spec.id == MeasureId::cdm_full ? cdm_full_index(x, target, w, opts) : scdm_index(x, target, w, opts);
        if (!v) {
          r.value = kNaN;
          r.unavailable = true;
          return r;
        }
        value = *v;
        break;
      }
      case MeasureId::rmc:
      case MeasureId::rmc_eta: {
        const RmcConfig cfg = rmc_config(spec, context.feature_seed);
        RmcEstimate est;
        if (spec.mode == Mode::target) {
          est = rmc_eta_mode(x, weight_eval(context.weight, y), cfg);
        } else if (spec.mode == Mode::hybrid) {
          const Vector w = weight_eval(context.weight, y);
          est = rmc_eta_mode(x, hybrid_transform(y, w), cfg);
        } else {
          const Vector w = spec.mode == Mode::conditional ? weight_eval(context.weight, y) : ones;
          est = spec.id == MeasureId::rmc ? rmc(x, s.response_variable(), w, cfg) : rmc_eta_mode(x, y, w, cfg);
        }
        value = est.value;
        r.clamped = est.clamped;
        break;
      }
    }
    r.value = apply_order(spec.order, value);
    r.out_of_range = r.value < 0.0 || r.value > 1.0;
  } catch (const Error& e) {
    r.value = kNaN;
    r.failure = e.what();
  }
  return r;
}

std::vector<SensitivityResult> run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::size_t d = dimension(config.model);
  std::vector<SensitivityResult> out;
  for (std::size_t n : config.sizes) {
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      const std::uint64_t seed = derive_seed(derive_seed(config.seed, n), rep);
      Matrix base = generate_design({n, d, config.scheme, seed, marginals(config.model)});
      const Vector y = eval_model(config.model, base);
      AnalysisContext context{Sample(base, Matrix(y)), config.model, std::move(base)};
      try {
        context.weight = make_weight(config.weight, y);
      } catch (const Error& e) {
        context.weight_error = e.what();
      }
      context.feature_seed = derive_seed(seed, 7);
      for (const MeasureSpec& m : config.measures)
        for (std::size_t i = 0; i < d; ++i) {
          SensitivityResult r = evaluate_measure(m, context, FactorGroup::single(i, d));
          r.repetition = rep;
          r.seed = seed;
          out.push_back(std::move(r));
        }
    }
  }
  return out;
}

std::vector<SensitivityResult> measure_sample(const Sample& sample, const std::vector<MeasureSpec>& measures,
                                              const WeightChoice& weight, std::uint64_t seed,
                                              std::optional<WeightSpec> fixed_weight) {
  if (measures.empty()) throw Error("no measures requested");
  for (const MeasureSpec& m : measures) {
    validate(m);
    if (m.id == MeasureId::pf)
      throw Error("pick-and-freeze needs its own paired design and cannot run on an external sample");
  }
  AnalysisContext context{sample};
  try {
    context.weight = fixed_weight ? *fixed_weight : make_weight(weight, sample.scalar_response());
  } catch (const Error& e) {
    context.weight_error = e.what();
  }
  context.feature_seed = derive_seed(seed, 7);
  const auto d = static_cast<std::size_t>(sample.d());
  std::vector<SensitivityResult> out;
  for (const MeasureSpec& m : measures)
    for (std::size_t i = 0; i < d; ++i) {
      SensitivityResult r = evaluate_measure(m, context, FactorGroup::single(i, d));
      r.seed = seed;
      out.push_back(std::move(r));
    }
  return out;
}

double ordering_proportion(const std::vector<SensitivityResult>& results, const std::string& measure, std::size_t n,
                           const std::vector<std::string>& ranking) {
  if (ranking.size() < 2) throw Error("reference ranking needs at least two groups");
  if (std::set<std::string>(ranking.begin(), ranking.end()).size() != ranking.size())
    throw Error("reference ranking repeats a group");
  std::map<std::size_t, std::map<std::string, double>> by_rep;
  for (const SensitivityResult& r : results)
    if (r.measure == measure && r.n == n) by_rep[r.repetition][r.group] = r.ok() ? r.value : kNaN;
  if (by_rep.empty()) throw Error("no results for measure " + measure + " at n = " + std::to_string(n));

  std::size_t hits = 0;
  for (const auto& [rep, values] : by_rep) {
    std::vector<double> ordered;
    for (const std::string& g : ranking) {
      const auto it = values.find(g);
      if (it == values.end())
        throw Error("repetition " + std::to_string(rep) + " of " + measure + " lacks group " + g);
      ordered.push_back(it->second);
    }
    bool strict = true;
    for (std::size_t k = 0; k + 1 < ordered.size(); ++k)
      if (!(ordered[k] > ordered[k + 1])) strict = false;
    if (strict) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(by_rep.size());
}

std::vector<ReferenceValue> asymptotic_reference(const ExperimentConfig& config, std::size_t n_ref, std::size_t reps) {
  ExperimentConfig cfg = config;
  cfg.sizes = {n_ref};
  cfg.repetitions = reps;
  const CsiszarOptions limits;
  for (const MeasureSpec& m : cfg.measures)
    if (m.id == MeasureId::cdm_full && static_cast<Eigen::Index>(n_ref) > limits.full_size_limit)
      throw Error("cdm-full reference refused: n_ref exceeds the O(n^3) size limit");
  const std::vector<SensitivityResult> results = run_experiment(cfg);

  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::size_t>> values;
  for (const SensitivityResult& r : results) {
    const auto key = std::make_pair(r.measure, r.group);
    if (!values.count(key)) keys.push_back(key);
    auto& slot = values[key];
    if (r.ok()) slot.first.push_back(r.value);
    else ++slot.second;
  }
  std::vector<ReferenceValue> out;
  for (const auto& key : keys) {
    const auto& [v, failures] = values[key];
    out.push_back({key.first, key.second, median_of(v), n_ref, reps, failures});
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<SensitivityResult>& results,
                                  const std::optional<std::vector<std::string>>& ranking) {
  using Key = std::tuple<std::string, std::size_t, std::string>;
  std::vector<Key> keys;
  std::map<Key, std::pair<std::vector<double>, std::size_t>> values;
  for (const SensitivityResult& r : results) {
    const Key key{r.measure, r.n, r.group};
    if (!values.count(key)) keys.push_back(key);
    auto& slot = values[key];
    if (r.ok()) slot.first.push_back(r.value);
    else ++slot.second;
  }
  std::vector<SummaryRow> out;
  std::set<std::pair<std::string, std::size_t>> ordered;
  for (const Key& key : keys) {
    const auto& [measure, n, group] = key;
    const auto& [v, failures] = values[key];
    SummaryRow row{measure, group, n, {}, failures, std::nullopt};
    if (!v.empty()) row.box = five_number_summary(v);
    if (ranking && ordered.insert({measure, n}).second) {
      try {
        row.ordering = ordering_proportion(results, measure, n, *ranking);
      } catch (const Error&) {
        row.ordering = std::nullopt;
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace tcsa
