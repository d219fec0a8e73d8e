#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pathtrust/csv.hpp"
#include "pathtrust/types.hpp"

namespace pathtrust {

inline constexpr const char* report_csv_header = "seq,pdr,packets,transit";

// One row per report: seq, pdr with six fractional digits, packet count, and
// the transit ids joined by ';' (empty field for an empty transit set).
inline std::string format_report_row(const PdrReport& r) {
  std::string row = std::to_string(r.seq);
  row += ',';
  row += csv::fixed(r.pdr, 6);
  row += ',';
  row += std::to_string(r.packets_sent);
  row += ',';
  for (std::size_t i = 0; i < r.transit.size(); ++i) {
    if (i) row += ';';
    row += std::to_string(r.transit[i]);
  }
  return row;
}

inline void write_reports(std::ostream& os, std::span<const PdrReport> reports) {
  os << report_csv_header << '\n';
  for (const auto& r : reports) os << format_report_row(r) << '\n';
}

inline PdrReport parse_report_row(std::string_view line, std::size_t line_no) {
  const auto fields = csv::split(csv::strip_eol(line), ',');
  if (fields.size() != 4)
    throw std::runtime_error("report line " + std::to_string(line_no) + ": expected 4 fields");
  const auto tag = "report line " + std::to_string(line_no);
  const std::uint64_t seq = csv::parse_u64(fields[0], tag.c_str());
  const double pdr = csv::parse_double(fields[1], tag.c_str());
  const std::uint64_t packets = csv::parse_u64(fields[2], tag.c_str());
  std::vector<NodeId> transit;
  if (!fields[3].empty())
    for (const auto part : csv::split(fields[3], ';'))
      transit.push_back(static_cast<NodeId>(csv::parse_u64(part, tag.c_str())));
  try {
    return make_report(seq, pdr, static_cast<std::uint32_t>(packets), std::move(transit));
  } catch (const std::invalid_argument& ex) {
    throw std::runtime_error(tag + ": " + ex.what());
  }
}

inline std::vector<PdrReport> read_reports(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || csv::strip_eol(line) != report_csv_header)
    throw std::runtime_error("report file: missing header '" + std::string(report_csv_header) + "'");
  std::vector<PdrReport> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (csv::strip_eol(line).empty()) continue;
    out.push_back(parse_report_row(line, line_no));
  }
  return out;
}

} // namespace pathtrust
