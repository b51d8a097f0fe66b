#ifndef TCSA_IO_HPP
#define TCSA_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tcsa/harness.hpp"
#include "tcsa/sample.hpp"

namespace tcsa {

inline constexpr std::string_view kSummarySchema = "tcsa.summary/1";
inline constexpr std::string_view kReferenceSchema = "tcsa.reference/1";

/// One JSON object per line. NaN values are written as null.
void write_results_jsonl(std::ostream& out, const std::vector<SensitivityResult>& results);
/// Rejects lines with any other schema tag, summaries included.
std::vector<SensitivityResult> read_results_jsonl(std::istream& in);

void write_summary_jsonl(std::ostream& out, const std::vector<SummaryRow>& rows);
/// Tab-separated, one header line.
void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows);

void write_reference_jsonl(std::ostream& out, const std::vector<ReferenceValue>& refs);

/// Long format for plotting: one row per result.
void write_long_csv(std::ostream& out, const std::vector<SensitivityResult>& results);

/// Sidecar layout: {"delimiter": ",", "columns": [{"name", "role", "kind"}]}
/// with role factor, response or ignore and kind continuous or categorical.
struct ColumnRole {
  std::string name;
  enum class Role { factor, response, ignore } role = Role::factor;
  ColumnKind kind = ColumnKind::continuous;
};

struct SampleLayout {
  char delimiter = ',';
  std::vector<ColumnRole> columns;
};

SampleLayout read_layout(std::istream& in);
void write_layout(std::ostream& out, const SampleLayout& layout);

/// Header row required; every header name must appear in the layout.
Sample read_sample(std::istream& csv, const SampleLayout& layout);
Sample read_sample(const std::filesystem::path& csv, const std::filesystem::path& sidecar);

/// Factors then responses, in the same format read_sample accepts.
void write_sample_csv(std::ostream& out, const Sample& sample, char delimiter = ',');
SampleLayout layout_of(const Sample& sample);

/// Factor-only export of a design with names X1..Xd.
void write_design_csv(std::ostream& out, const Matrix& design, char delimiter = ',');

/// {"model": {"name", ...params}, "suite" or "measures", "sizes", "repetitions",
///  "seed", "scheme", "weight": {"kind", "level", "smoothing"}}
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig read_config(const std::filesystem::path& path);

/// Comma-separated "id[/mode[/order]]" items; a suite name expands in place.
std::vector<MeasureSpec> parse_measure_list(std::string_view text, Mode default_mode = Mode::global);

}  // namespace tcsa

#endif  // TCSA_IO_HPP
