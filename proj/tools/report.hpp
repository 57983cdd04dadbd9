#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csma::cli {

// Normalized values only; Mbps columns are rendered as value x rate_mbps.
struct LinkReport {
  std::string link;
  std::optional<double> icn_norm;
  std::optional<double> gicn_norm;
  std::optional<double> exact_norm;
  std::optional<double> sim_norm;
  std::optional<double> sim_ci;
  std::optional<double> gicn_pcol;
  std::optional<double> exact_pcol;
  std::optional<double> sim_pcol;
  std::optional<double> sim_pcol_ci;

  friend bool operator==(const LinkReport&, const LinkReport&) = default;
};

struct ReportRow {
  std::string topology;
  double rate_mbps = 7.229;
  std::vector<LinkReport> links;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

enum class ReportFormat { kTable, kCsv, kJson };

std::optional<ReportFormat> parse_format(std::string_view name);

inline constexpr std::string_view kCsvHeader =
    "topology,link,icn_norm,icn_mbps,gicn_norm,gicn_mbps,exact_norm,sim_norm,sim_ci,gicn_pcol,"
    "sim_pcol,sim_pcol_ci";

// Table: one aligned block per row showing only the columns that carry data.
// CSV: kCsvHeader, then one line per link, 6 decimals, empty cells for
// missing values. JSON: {"rows": [...]} with the struct's field names plus
// the derived *_mbps fields.
void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, std::ostream& out);

// Inverse of the JSON form; *_mbps fields are ignored. Throws
// std::runtime_error on malformed input.
std::vector<ReportRow> parse_json_report(std::string_view text);

}  // namespace csma::cli
