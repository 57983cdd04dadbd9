#include "report.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace csma::cli {

namespace {

using Field = std::optional<double> LinkReport::*;

struct Column {
  std::string_view name;
  Field field;
};

constexpr Column kFields[] = {
    {"icn_norm", &LinkReport::icn_norm},     {"gicn_norm", &LinkReport::gicn_norm},
    {"exact_norm", &LinkReport::exact_norm}, {"sim_norm", &LinkReport::sim_norm},
    {"sim_ci", &LinkReport::sim_ci},         {"gicn_pcol", &LinkReport::gicn_pcol},
    {"exact_pcol", &LinkReport::exact_pcol}, {"sim_pcol", &LinkReport::sim_pcol},
    {"sim_pcol_ci", &LinkReport::sim_pcol_ci},
};

std::optional<double> mbps(const std::optional<double>& norm, double rate) {
  if (!norm) return std::nullopt;
  return *norm * rate;
}

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : ""; }

// A value with an optional +- half-width.
std::string with_ci(const std::optional<double>& v, const std::optional<double>& ci, int digits) {
  if (!v) return "";
  if (!ci) return fmt::format("{:.{}f}", *v, digits);
  return fmt::format("{:.{}f} ± {:.{}f}", *v, digits, *ci, digits);
}

// Display width; "±" is two bytes but one column.
std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

void emit_csv(const std::vector<ReportRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ReportRow& row : rows) {
    for (const LinkReport& l : row.links) {
      out << row.topology << ',' << l.link << ',' << cell(l.icn_norm) << ','
          << cell(mbps(l.icn_norm, row.rate_mbps)) << ',' << cell(l.gicn_norm) << ','
          << cell(mbps(l.gicn_norm, row.rate_mbps)) << ',' << cell(l.exact_norm) << ','
          << cell(l.sim_norm) << ',' << cell(l.sim_ci) << ',' << cell(l.gicn_pcol) << ','
          << cell(l.sim_pcol) << ',' << cell(l.sim_pcol_ci) << '\n';
    }
  }
}

void emit_table(const std::vector<ReportRow>& rows, std::ostream& out) {
  struct TableColumn {
    std::string title;
    std::vector<std::string> cells;
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const ReportRow& row = rows[r];
    auto any = [&](Field f) {
      return std::any_of(row.links.begin(), row.links.end(),
                         [f](const LinkReport& l) { return (l.*f).has_value(); });
    };
    std::vector<TableColumn> cols;
    auto add = [&](std::string title, auto render) {
      TableColumn c{std::move(title), {}};
      for (const LinkReport& l : row.links) c.cells.push_back(render(l));
      cols.push_back(std::move(c));
    };
    const double rate = row.rate_mbps;
    add("link", [](const LinkReport& l) { return l.link; });
    if (any(&LinkReport::icn_norm)) {
      add("ICN", [](const LinkReport& l) { return with_ci(l.icn_norm, {}, 4); });
      add("ICN Mbps", [rate](const LinkReport& l) { return with_ci(mbps(l.icn_norm, rate), {}, 4); });
    }
    if (any(&LinkReport::gicn_norm)) {
      add("GICN", [](const LinkReport& l) { return with_ci(l.gicn_norm, {}, 4); });
      add("GICN Mbps", [rate](const LinkReport& l) { return with_ci(mbps(l.gicn_norm, rate), {}, 4); });
    }
    if (any(&LinkReport::exact_norm)) {
      add("exact", [](const LinkReport& l) { return with_ci(l.exact_norm, {}, 4); });
    }
    if (any(&LinkReport::sim_norm)) {
      add("sim", [](const LinkReport& l) { return with_ci(l.sim_norm, l.sim_ci, 4); });
      add("sim Mbps", [rate](const LinkReport& l) {
        return with_ci(mbps(l.sim_norm, rate), mbps(l.sim_ci, rate), 4);
      });
    }
    if (any(&LinkReport::gicn_pcol)) {
      add("GICN p", [](const LinkReport& l) { return with_ci(l.gicn_pcol, {}, 4); });
    }
    if (any(&LinkReport::exact_pcol)) {
      add("exact p", [](const LinkReport& l) { return with_ci(l.exact_pcol, {}, 4); });
    }
    if (any(&LinkReport::sim_pcol)) {
      add("sim p", [](const LinkReport& l) { return with_ci(l.sim_pcol, l.sim_pcol_ci, 4); });
    }

    std::vector<std::size_t> width;
    for (const TableColumn& c : cols) {
      std::size_t w = c.title.size();
      for (const auto& s : c.cells) w = std::max(w, display_width(s));
      width.push_back(w);
    }
    auto line = [&](auto text_of) {
      std::string s;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const std::string t = text_of(c);
        const std::string pad(width[c] - display_width(t), ' ');
        s += c == 0 ? t + pad : "  " + pad + t;
      }
      out << s << '\n';
    };

    if (r > 0) out << '\n';
    out << fmt::format("{} (rate {} Mbps)\n", row.topology, row.rate_mbps);
    line([&](std::size_t c) { return cols[c].title; });
    for (std::size_t i = 0; i < row.links.size(); ++i) {
      line([&](std::size_t c) { return cols[c].cells[i]; });
    }
  }
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

void emit_json(const std::vector<ReportRow>& rows, std::ostream& out) {
  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  for (const ReportRow& row : rows) {
    nlohmann::json r;
    r["topology"] = row.topology;
    r["rate_mbps"] = row.rate_mbps;
    r["links"] = nlohmann::json::array();
    for (const LinkReport& l : row.links) {
      nlohmann::json j;
      j["link"] = l.link;
      for (const Column& c : kFields) j[std::string(c.name)] = optional_json(l.*c.field);
      j["icn_mbps"] = optional_json(mbps(l.icn_norm, row.rate_mbps));
      j["gicn_mbps"] = optional_json(mbps(l.gicn_norm, row.rate_mbps));
      j["exact_mbps"] = optional_json(mbps(l.exact_norm, row.rate_mbps));
      j["sim_mbps"] = optional_json(mbps(l.sim_norm, row.rate_mbps));
      r["links"].push_back(std::move(j));
    }
    doc["rows"].push_back(std::move(r));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace

std::optional<ReportFormat> parse_format(std::string_view name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  return std::nullopt;
}

void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::kTable: emit_table(rows, out); break;
    case ReportFormat::kCsv: emit_csv(rows, out); break;
    case ReportFormat::kJson: emit_json(rows, out); break;
  }
  out.flush();
}

std::vector<ReportRow> parse_json_report(std::string_view text) {
  std::vector<ReportRow> rows;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& r : doc.at("rows")) {
      ReportRow row;
      row.topology = r.at("topology").get<std::string>();
      row.rate_mbps = r.at("rate_mbps").get<double>();
      for (const auto& j : r.at("links")) {
        LinkReport l;
        l.link = j.at("link").get<std::string>();
        for (const Column& c : kFields) {
          const auto& v = j.at(std::string(c.name));
          if (!v.is_null()) l.*c.field = v.get<double>();
        }
        row.links.push_back(std::move(l));
      }
      rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
  return rows;
}

}  // namespace csma::cli
