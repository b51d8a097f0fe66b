#include "tcsa/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tcsa {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delim)) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size() || !std::isfinite(v))
    throw Error("row " + std::to_string(row) + ", column " + column + ": not a finite number '" + cell + "'");
  return v;
}

json parse_json(std::istream& in, const char* what) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed ") + what + ": " + e.what());
  }
}

ColumnRole::Role parse_role(const std::string& s) {
  if (s == "factor") return ColumnRole::Role::factor;
  if (s == "response") return ColumnRole::Role::response;
  if (s == "ignore") return ColumnRole::Role::ignore;
  throw Error("unknown column role '" + s + "'");
}

std::string_view role_name(ColumnRole::Role r) {
  switch (r) {
    case ColumnRole::Role::factor: return "factor";
    case ColumnRole::Role::response: return "response";
    case ColumnRole::Role::ignore: return "ignore";
  }
  return "ignore";
}

ModelSpec parse_model_json(const json& j) {
  if (j.is_string()) return parse_model(j.get<std::string>());
  ModelSpec model = parse_model(j.at("name").get<std::string>());
  if (auto* g = std::get_if<SobolG>(&model)) {
    if (j.contains("a")) g->a = j.at("a").get<std::vector<double>>();
  } else if (auto* ih = std::get_if<IshigamiHomma>(&model)) {
    if (j.contains("a")) ih->a = j.at("a").get<double>();
    if (j.contains("b")) ih->b = j.at("b").get<double>();
  }
  validate(model);
  return model;
}

MeasureSpec parse_measure_json(const json& j) {
  if (j.is_string()) {
    const auto list = parse_measure_list(j.get<std::string>());
    if (list.size() != 1) throw Error("measure entry expands to several measures");
    return list.front();
  }
  MeasureSpec m;
  m.id = parse_measure_id(j.at("id").get<std::string>());
  if (j.contains("mode")) m.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("order")) m.order = parse_order(j.at("order").get<std::string>());
  if (j.contains("gamma")) m.gamma = j.at("gamma").get<double>();
  if (j.contains("features")) m.features = j.at("features").get<std::size_t>();
  if (j.contains("phi")) m.phi = j.at("phi").get<std::string>();
  validate(m);
  return m;
}

}  // namespace

void write_results_jsonl(std::ostream& out, const std::vector<SensitivityResult>& results) {
  for (const SensitivityResult& r : results) {
    json j{{"schema", kResultSchema},
           {"measure", r.measure},
           {"id", to_string(r.id)},
           {"mode", to_string(r.mode)},
           {"order", to_string(r.order)},
           {"group", r.group},
           {"value", number(r.value)},
           {"n", r.n},
           {"repetition", r.repetition},
           {"seed", r.seed},
           {"out_of_range", r.out_of_range},
           {"clamped", r.clamped},
           {"unavailable", r.unavailable}};
    if (!r.failure.empty()) j["failure"] = r.failure;
    out << j.dump() << '\n';
  }
}

std::vector<SensitivityResult> read_results_jsonl(std::istream& in) {
  std::vector<SensitivityResult> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
    const std::string schema = j.value("schema", "");
    if (schema != kResultSchema)
      throw Error("line " + std::to_string(lineno) + ": expected result records, found schema '" + schema + "'");
    try {
      SensitivityResult r;
      r.measure = j.at("measure").get<std::string>();
      r.id = parse_measure_id(j.at("id").get<std::string>());
      r.mode = parse_mode(j.at("mode").get<std::string>());
      r.order = parse_order(j.at("order").get<std::string>());
      r.group = j.at("group").get<std::string>();
      r.value = number_or_nan(j.at("value"));
      r.n = j.at("n").get<std::size_t>();
      r.repetition = j.at("repetition").get<std::size_t>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.out_of_range = j.value("out_of_range", false);
      r.clamped = j.value("clamped", false);
      r.unavailable = j.value("unavailable", false);
      r.failure = j.value("failure", "");
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_summary_jsonl(std::ostream& out, const std::vector<SummaryRow>& rows) {
  for (const SummaryRow& r : rows) {
    json j{{"schema", kSummarySchema},
           {"measure", r.measure},
           {"group", r.group},
           {"n", r.n},
           {"count", r.box.count},
           {"failures", r.failures}};
    if (r.box.count > 0) {
      j["min"] = r.box.min;
      j["q1"] = r.box.q1;
      j["median"] = r.box.median;
      j["q3"] = r.box.q3;
      j["max"] = r.box.max;
      j["lower_whisker"] = r.box.lower_whisker;
      j["upper_whisker"] = r.box.upper_whisker;
      j["outliers"] = r.box.outliers;
    }
    if (r.ordering) j["ordering"] = *r.ordering;
    out << j.dump() << '\n';
  }
}

void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "measure\tgroup\tn\tcount\tfailures\tlower_whisker\tq1\tmedian\tq3\tupper_whisker\toutliers\tordering\n";
  for (const SummaryRow& r : rows) {
    const bool has = r.box.count > 0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << r.measure << '\t' << r.group << '\t' << r.n << '\t' << r.box.count << '\t' << r.failures << '\t'
        << format_double(has ? r.box.lower_whisker : nan) << '\t' << format_double(has ? r.box.q1 : nan) << '\t'
        << format_double(has ? r.box.median : nan) << '\t' << format_double(has ? r.box.q3 : nan) << '\t'
        << format_double(has ? r.box.upper_whisker : nan) << '\t' << r.box.outliers.size() << '\t'
        << (r.ordering ? format_double(*r.ordering) : std::string("-")) << '\n';
  }
}

void write_reference_jsonl(std::ostream& out, const std::vector<ReferenceValue>& refs) {
  for (const ReferenceValue& r : refs) {
    json j{{"schema", kReferenceSchema}, {"measure", r.measure},         {"group", r.group},
           {"median", number(r.median)}, {"n", r.n},                     {"repetitions", r.repetitions},
           {"failures", r.failures},     {"reference", true}};
    out << j.dump() << '\n';
  }
}

void write_long_csv(std::ostream& out, const std::vector<SensitivityResult>& results) {
  out << "measure,id,mode,order,group,n,repetition,value,status\n";
  for (const SensitivityResult& r : results) {
    const char* status = !r.failure.empty() ? "failed" : r.unavailable ? "unavailable" : r.clamped ? "clamped" : "ok";
    out << r.measure << ',' << to_string(r.id) << ',' << to_string(r.mode) << ',' << to_string(r.order) << ",\""
        << r.group << "\"," << r.n << ',' << r.repetition << ',' << format_double(r.value) << ',' << status << '\n';
  }
}

SampleLayout read_layout(std::istream& in) {
  const json j = parse_json(in, "sample layout");
  SampleLayout layout;
  try {
    if (j.contains("delimiter")) {
      const std::string d = j.at("delimiter").get<std::string>();
      if (d.size() != 1) throw Error("delimiter must be a single character");
      layout.delimiter = d[0];
    }
    for (const json& c : j.at("columns")) {
      ColumnRole col;
      col.name = c.at("name").get<std::string>();
      col.role = parse_role(c.value("role", "factor"));
      col.kind = parse_column_kind(c.value("kind", "continuous"));
      layout.columns.push_back(std::move(col));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed sample layout: ") + e.what());
  }
  return layout;
}

void write_layout(std::ostream& out, const SampleLayout& layout) {
  json cols = json::array();
  for (const ColumnRole& c : layout.columns)
    cols.push_back({{"name", c.name}, {"role", role_name(c.role)}, {"kind", to_string(c.kind)}});
  out << json{{"delimiter", std::string(1, layout.delimiter)}, {"columns", cols}}.dump(2) << '\n';
}

Sample read_sample(std::istream& csv, const SampleLayout& layout) {
  std::string line;
  if (!std::getline(csv, line)) throw Error("sample file is empty");
  const std::vector<std::string> header = split(line, layout.delimiter);

  std::vector<const ColumnRole*> roles;
  for (const std::string& name : header) {
    const ColumnRole* found = nullptr;
    for (const ColumnRole& c : layout.columns)
      if (c.name == name) found = &c;
    if (!found) throw Error("column '" + name + "' is not described in the layout");
    roles.push_back(found);
  }
  for (const ColumnRole& c : layout.columns) {
    bool present = false;
    for (const std::string& name : header) present = present || name == c.name;
    if (!present) throw Error("layout column '" + c.name + "' is missing from the sample header");
  }

  std::vector<ColumnKind> kinds;
  std::vector<std::string> factor_names, response_names;
  for (const ColumnRole* r : roles) {
    if (r->role == ColumnRole::Role::factor) {
      kinds.push_back(r->kind);
      factor_names.push_back(r->name);
    } else if (r->role == ColumnRole::Role::response) {
      response_names.push_back(r->name);
    }
  }
  if (factor_names.empty()) throw Error("layout declares no factor column");
  if (response_names.empty()) throw Error("layout declares no response column");

  std::vector<std::vector<double>> fx, ry;
  std::size_t row = 1;
  while (std::getline(csv, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> cells = split(line, layout.delimiter);
    if (cells.size() != header.size())
      throw Error("row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " cells, expected " +
                  std::to_string(header.size()));
    std::vector<double> f, y;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (roles[c]->role == ColumnRole::Role::ignore) continue;
      const double v = parse_cell(cells[c], row, header[c]);
      (roles[c]->role == ColumnRole::Role::factor ? f : y).push_back(v);
    }
    fx.push_back(std::move(f));
    ry.push_back(std::move(y));
  }
  if (fx.empty()) throw Error("sample file has no data rows");

  Matrix factors(static_cast<Eigen::Index>(fx.size()), static_cast<Eigen::Index>(factor_names.size()));
  Matrix response(static_cast<Eigen::Index>(ry.size()), static_cast<Eigen::Index>(response_names.size()));
  for (std::size_t i = 0; i < fx.size(); ++i) {
    for (std::size_t j = 0; j < fx[i].size(); ++j) factors(i, j) = fx[i][j];
    for (std::size_t j = 0; j < ry[i].size(); ++j) response(i, j) = ry[i][j];
  }
  return Sample(std::move(factors), std::move(response), std::move(kinds), std::move(factor_names),
                std::move(response_names));
}

Sample read_sample(const std::filesystem::path& csv, const std::filesystem::path& sidecar) {
  std::ifstream side(sidecar);
  if (!side) throw Error("cannot open sample layout " + sidecar.string());
  const SampleLayout layout = read_layout(side);
  std::ifstream data(csv);
  if (!data) throw Error("cannot open sample file " + csv.string());
  return read_sample(data, layout);
}

SampleLayout layout_of(const Sample& sample) {
  SampleLayout layout;
  for (Eigen::Index j = 0; j < sample.d(); ++j)
    layout.columns.push_back({sample.factor_names()[j], ColumnRole::Role::factor, sample.factor_kinds()[j]});
  for (Eigen::Index j = 0; j < sample.p(); ++j)
    layout.columns.push_back({sample.response_names()[j], ColumnRole::Role::response, ColumnKind::continuous});
  return layout;
}

void write_sample_csv(std::ostream& out, const Sample& sample, char delimiter) {
  const SampleLayout layout = layout_of(sample);
  for (std::size_t c = 0; c < layout.columns.size(); ++c) out << (c ? std::string(1, delimiter) : "") << layout.columns[c].name;
  out << '\n';
  for (Eigen::Index i = 0; i < sample.n(); ++i) {
    for (Eigen::Index j = 0; j < sample.d(); ++j) out << (j ? std::string(1, delimiter) : "") << format_double(sample.factors()(i, j));
    for (Eigen::Index j = 0; j < sample.p(); ++j) out << delimiter << format_double(sample.response()(i, j));
    out << '\n';
  }
}

void write_design_csv(std::ostream& out, const Matrix& design, char delimiter) {
  for (Eigen::Index j = 0; j < design.cols(); ++j) out << (j ? std::string(1, delimiter) : "") << 'X' << j + 1;
  out << '\n';
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    for (Eigen::Index j = 0; j < design.cols(); ++j) out << (j ? std::string(1, delimiter) : "") << format_double(design(i, j));
    out << '\n';
  }
}

std::vector<MeasureSpec> parse_measure_list(std::string_view text, Mode default_mode) {
  std::vector<MeasureSpec> out;
  std::string item;
  std::istringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item.rfind("table", 0) == 0 || item == "ratio") {
      const auto suite = measure_suite(item);
      out.insert(out.end(), suite.begin(), suite.end());
      continue;
    }
    const std::vector<std::string> parts = split(item, '/');
    if (parts.empty() || parts.size() > 3) throw Error("bad measure '" + item + "'");
    MeasureSpec m;
    m.id = parse_measure_id(parts[0]);
    m.mode = parts.size() > 1 ? parse_mode(parts[1]) : default_mode;
    if (parts.size() > 2) m.order = parse_order(parts[2]);
    validate(m);
    out.push_back(m);
  }
  if (out.empty()) throw Error("no measures given");
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  const json j = parse_json(in, "experiment config");
  ExperimentConfig cfg;
  try {
    cfg.model = parse_model_json(j.at("model"));
    if (j.contains("suite")) cfg.measures = measure_suite(j.at("suite").get<std::string>());
    if (j.contains("measures"))
      for (const json& m : j.at("measures")) cfg.measures.push_back(parse_measure_json(m));
    if (j.contains("sizes")) cfg.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("scheme")) cfg.scheme = parse_scheme(j.at("scheme").get<std::string>());
    if (j.contains("weight")) {
      const json& w = j.at("weight");
      if (w.contains("kind")) cfg.weight.kind = parse_weight_kind(w.at("kind").get<std::string>());
      if (w.contains("level")) cfg.weight.level = w.at("level").get<double>();
      if (w.contains("smoothing")) cfg.weight.smoothing = w.at("smoothing").get<double>();
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed experiment config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_config(in);
}

}  // namespace tcsa
