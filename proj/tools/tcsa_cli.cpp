// Command-line front end: designs, benchmark sweeps, measures on user data,
// and box-plot summaries of result files.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tcsa/harness.hpp"
#include "tcsa/io.hpp"

namespace {

struct Outputs {
  std::string prefix;

  std::ofstream open(const std::string& suffix) const {
    std::ofstream f(prefix + suffix);
    if (!f) throw tcsa::Error("cannot write " + prefix + suffix);
    return f;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void emit(const std::vector<tcsa::SensitivityResult>& results, const std::optional<std::vector<std::string>>& ranking,
          const std::string& prefix) {
  const auto rows = tcsa::summarize(results, ranking);
  tcsa::write_summary_table(std::cout, rows);
  if (prefix.empty()) return;
  const Outputs out{prefix};
  {
    auto f = out.open(".jsonl");
    tcsa::write_results_jsonl(f, results);
  }
  {
    auto f = out.open(".summary.jsonl");
    tcsa::write_summary_jsonl(f, rows);
  }
  {
    auto f = out.open(".summary.tsv");
    tcsa::write_summary_table(f, rows);
  }
  auto f = out.open(".long.csv");
  tcsa::write_long_csv(f, results);
}

std::optional<std::vector<std::string>> default_ranking(const tcsa::ModelSpec& model) {
  if (std::holds_alternative<tcsa::SobolG>(model)) {
    const auto& a = std::get<tcsa::SobolG>(model).a;
    // Factors get less influential as a_i grows.
    std::vector<std::size_t> idx(a.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto l, auto r) { return a[l] < a[r]; });
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
      if (a[idx[i]] == a[idx[i + 1]]) return std::nullopt;
    std::vector<std::string> out;
    for (std::size_t i : idx) out.push_back("X" + std::to_string(i + 1));
    return out;
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Target and conditional sensitivity analysis toolkit"};
  app.require_subcommand(1);

  // design
  auto* design = app.add_subcommand("design", "Emit a factor design, optionally evaluated through a model");
  std::string design_model;
  std::size_t design_n = 100, design_d = 2;
  std::uint64_t design_seed = 1;
  std::string design_scheme = "lhs";
  std::vector<std::string> design_marginals;
  std::string design_out;
  design->add_option("--model", design_model, "sobol-g, ishigami or min-normal-uniform; also writes the response");
  design->add_option("--n", design_n, "Number of rows")->check(CLI::PositiveNumber);
  design->add_option("--d", design_d, "Dimension when no model is given")->check(CLI::PositiveNumber);
  design->add_option("--seed", design_seed, "Seed");
  design->add_option("--scheme", design_scheme, "lhs or random");
  design->add_option("--marginal", design_marginals, "uniform, uniform(a,b) or normal; repeat per factor")
      ->delimiter('\0');
  design->add_option("--out", design_out, "Output CSV; a .json layout is written next to it with --model");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a repetition sweep on a benchmark model");
  std::string bench_model = "sobol-g", bench_suite, bench_measures, bench_mode = "global", bench_weight = "indicator";
  std::string bench_config, bench_out, bench_ranking, bench_scheme = "lhs";
  std::vector<std::size_t> bench_n{1000};
  std::size_t bench_reps = 100, bench_ref_n = 0, bench_ref_reps = 10;
  std::uint64_t bench_seed = 1;
  double bench_quantile = 0.9, bench_smoothing = 0.2;
  bench->add_option("model", bench_model, "sobol-g, ishigami or min-normal-uniform");
  bench->add_option("--suite", bench_suite, "table1, table2, table3 or ratio");
  bench->add_option("--measures", bench_measures, "Comma list of id[/mode[/order]] items");
  bench->add_option("--mode", bench_mode, "Default mode for bare measure ids")
      ->check(CLI::IsMember({"global", "target", "conditional", "hybrid"}));
  bench->add_option("--n", bench_n, "Sample sizes")->delimiter(',');
  bench->add_option("--reps", bench_reps, "Repetitions per size")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "Master seed");
  bench->add_option("--scheme", bench_scheme, "lhs or random");
  bench->add_option("--weight", bench_weight, "Critical-domain weight")->check(CLI::IsMember({"indicator", "smooth"}));
  bench->add_option("--quantile", bench_quantile, "Quantile level of the critical threshold");
  bench->add_option("--smoothing", bench_smoothing, "Smoothing factor of the smooth weight");
  bench->add_option("--ranking", bench_ranking, "Reference ranking of groups, e.g. X1,X2,X3,X4");
  bench->add_option("--reference", bench_ref_n, "Also compute asymptotic references at this size");
  bench->add_option("--reference-reps", bench_ref_reps, "Repetitions for the references");
  bench->add_option("--config", bench_config, "JSON experiment config; replaces the other options");
  bench->add_option("--out", bench_out, "Output prefix");

  // measure
  auto* measure = app.add_subcommand("measure", "Compute measures on a user sample");
  std::string m_sample, m_layout, m_measures = "qdm,mi-knn,rmc", m_mode = "global", m_weight = "indicator", m_out;
  std::uint64_t m_seed = 1;
  double m_quantile = 0.9, m_smoothing = 0.2;
  measure->add_option("--sample", m_sample, "Delimited sample file with a header row")->required();
  measure->add_option("--layout", m_layout, "JSON column layout; defaults to the sample path with .json");
  measure->add_option("--measures", m_measures, "Comma list of id[/mode[/order]] items");
  measure->add_option("--mode", m_mode, "Default mode for bare measure ids")
      ->check(CLI::IsMember({"global", "target", "conditional", "hybrid"}));
  measure->add_option("--weight", m_weight, "Critical-domain weight")->check(CLI::IsMember({"indicator", "smooth"}));
  measure->add_option("--quantile", m_quantile, "Quantile level of the critical threshold");
  measure->add_option("--smoothing", m_smoothing, "Smoothing factor of the smooth weight");
  measure->add_option("--seed", m_seed, "Seed of the random features");
  measure->add_option("--out", m_out, "Output prefix");

  // summarize
  auto* summarize = app.add_subcommand("summarize", "Box-plot tables from result files");
  std::vector<std::string> s_inputs;
  std::string s_ranking, s_out;
  summarize->add_option("inputs", s_inputs, "Result JSONL files")->required();
  summarize->add_option("--ranking", s_ranking, "Reference ranking of groups");
  summarize->add_option("--out", s_out, "Output prefix for summary files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*design) {
      tcsa::DesignSpec spec{design_n, design_d, tcsa::parse_scheme(design_scheme), design_seed};
      if (!design_model.empty()) {
        const tcsa::ModelSpec model = tcsa::parse_model(design_model);
        spec.d = tcsa::dimension(model);
        const tcsa::Sample sample = tcsa::sample_model(model, spec);
        std::ofstream file;
        std::ostream& out = design_out.empty() ? std::cout : (file.open(design_out), file);
        tcsa::write_sample_csv(out, sample);
        if (!design_out.empty()) {
          std::ofstream side(std::filesystem::path(design_out).replace_extension(".json"));
          tcsa::write_layout(side, tcsa::layout_of(sample));
        }
        return 0;
      }
      spec.marginals.clear();
      for (const auto& m : design_marginals) spec.marginals.push_back(tcsa::parse_marginal(m));
      if (spec.marginals.empty()) spec.marginals.push_back(tcsa::UniformMarginal{});
      const tcsa::Matrix x = tcsa::generate_design(spec);
      std::ofstream file;
      std::ostream& out = design_out.empty() ? std::cout : (file.open(design_out), file);
      tcsa::write_design_csv(out, x);
      return 0;
    }

    if (*bench) {
      tcsa::ExperimentConfig cfg;
      if (!bench_config.empty()) {
        cfg = tcsa::read_config(bench_config);
      } else {
        cfg.model = tcsa::parse_model(bench_model);
        const tcsa::Mode mode = tcsa::parse_mode(bench_mode);
        if (!bench_suite.empty()) cfg.measures = tcsa::measure_suite(bench_suite);
        if (!bench_measures.empty()) {
          const auto extra = tcsa::parse_measure_list(bench_measures, mode);
          cfg.measures.insert(cfg.measures.end(), extra.begin(), extra.end());
        }
        if (cfg.measures.empty()) cfg.measures = tcsa::measure_suite("table1");
        cfg.sizes = bench_n;
        cfg.repetitions = bench_reps;
        cfg.seed = bench_seed;
        cfg.scheme = tcsa::parse_scheme(bench_scheme);
        cfg.weight = {tcsa::parse_weight_kind(bench_weight), bench_quantile, bench_smoothing};
        tcsa::validate(cfg);
      }
      const auto ranking = bench_ranking.empty() ? default_ranking(cfg.model)
                                                 : std::optional<std::vector<std::string>>(split_list(bench_ranking));
      const auto results = tcsa::run_experiment(cfg);
      emit(results, ranking, bench_out);
      if (bench_ref_n > 0) {
        const auto refs = tcsa::asymptotic_reference(cfg, bench_ref_n, bench_ref_reps);
        if (bench_out.empty()) {
          tcsa::write_reference_jsonl(std::cout, refs);
        } else {
          auto f = Outputs{bench_out}.open(".reference.jsonl");
          tcsa::write_reference_jsonl(f, refs);
        }
      }
      return 0;
    }

    if (*measure) {
      const std::string layout =
          m_layout.empty() ? std::filesystem::path(m_sample).replace_extension(".json").string() : m_layout;
      const tcsa::Sample sample = tcsa::read_sample(m_sample, layout);
      const auto measures = tcsa::parse_measure_list(m_measures, tcsa::parse_mode(m_mode));
      const tcsa::WeightChoice weight{tcsa::parse_weight_kind(m_weight), m_quantile, m_smoothing};
      const auto results = tcsa::measure_sample(sample, measures, weight, m_seed);
      emit(results, std::nullopt, m_out);
      return 0;
    }

    if (*summarize) {
      std::vector<tcsa::SensitivityResult> results;
      for (const auto& path : s_inputs) {
        std::ifstream in(path);
        if (!in) throw tcsa::Error("cannot open " + path);
        const auto part = tcsa::read_results_jsonl(in);
        results.insert(results.end(), part.begin(), part.end());
      }
      if (results.empty()) throw tcsa::Error("no result records found");
      const auto ranking =
          s_ranking.empty() ? std::nullopt : std::optional<std::vector<std::string>>(split_list(s_ranking));
      const auto rows = tcsa::summarize(results, ranking);
      tcsa::write_summary_table(std::cout, rows);
      if (!s_out.empty()) {
        const Outputs out{s_out};
        auto j = out.open(".summary.jsonl");
        tcsa::write_summary_jsonl(j, rows);
        auto t = out.open(".summary.tsv");
        tcsa::write_summary_table(t, rows);
      }
      return 0;
    }
  } catch (const tcsa::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
