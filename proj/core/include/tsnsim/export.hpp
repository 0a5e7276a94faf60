#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tsnsim/run_result.hpp"

namespace tsnsim {

/// Columns: stream,seq,tx_ns,rx_ns,latency_ns (stream by name).
std::string records_csv(const RunResult& r);
/// One row of summary statistics per stream plus drop counters.
std::string stats_csv(const RunResult& r);
/// Columns: true_ns,slave_id,deviation_ns.
std::string deviations_csv(const RunResult& r);
std::string result_json(const RunResult& r);

/// Parses records_csv output back; stream names map to indices in order of
/// first appearance. Throws ParseError.
std::vector<std::pair<std::string, std::vector<LatencyRecord>>> parse_records_csv(const std::string& text);
/// Inverse of result_json. Throws ParseError.
RunResult parse_result_json(const std::string& text);

struct SvgOptions {
  double min_probability = 1e-6;
  std::string title;
};

/// Log-y CCDF, one curve per stream; empty streams are listed in the legend
/// as having no samples.
std::string ccdf_svg(const RunResult& r, const SvgOptions& opt = {});

struct BoxSeries {
  std::string label;
  std::vector<std::int64_t> values;
};
/// Log-y boxplot with one box per series.
std::string boxplot_svg(const std::vector<BoxSeries>& series, const std::string& title, const std::string& y_label);

/// Writes the selected formats ("csv", "json", "svg") into dir and returns
/// the written paths. Throws IoError.
std::vector<std::filesystem::path> export_result(const RunResult& r, const std::filesystem::path& dir,
                                                 const std::vector<std::string>& formats);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace tsnsim
