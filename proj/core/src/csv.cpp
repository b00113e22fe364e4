// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace metamix {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

[[noreturn]] void cell_error(std::size_t row, const std::string& column,
                             const std::string& what) {
  throw InputError("row " + std::to_string(row) + ", column '" + column + "': " + what);
}

long parse_count(const std::string& cell, std::size_t row, const std::string& column) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    cell_error(row, column, "expected an integer, got '" + cell + "'");
  }
  return value;
}

double parse_real(const std::string& cell, std::size_t row, const std::string& column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    cell_error(row, column, "expected a number, got '" + cell + "'");
  }
  return value;
}

void check_header(const std::vector<std::string>& got,
                  const std::vector<std::string>& want) {
  if (got.size() != want.size()) {
    throw InputError("header: expected " + std::to_string(want.size()) +
                     " columns, got " + std::to_string(got.size()));
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (got[i] != want[i]) {
      throw InputError("header: expected column '" + want[i] + "', got '" + got[i] + "'");
    }
  }
}

std::vector<std::vector<std::string>> read_rows(std::istream& in,
                                                const std::vector<std::string>& header) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV input");
  check_header(split_row(line), header);
  std::vector<std::vector<std::string>> rows;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw InputError("row " + std::to_string(row_no - 1) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw InputError("CSV contains a header but no data rows");
  return rows;
}

const std::vector<std::string> kCountsHeader = {
    "study", "patients", "treat_events", "treat_total", "ctrl_events", "ctrl_total"};
const std::vector<std::string> kEffectsHeader = {"study", "patients", "y", "se"};

}  // namespace

std::vector<TwoByTwoTable> parse_counts_csv(std::istream& in) {
  const auto rows = read_rows(in, kCountsHeader);
  std::vector<TwoByTwoTable> tables;
  tables.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::size_t row_no = r + 1;
    TwoByTwoTable t;
    t.study_label = cells[0];
    t.group_label = cells[1];
    t.treat_events = parse_count(cells[2], row_no, "treat_events");
    t.treat_total = parse_count(cells[3], row_no, "treat_total");
    t.ctrl_events = parse_count(cells[4], row_no, "ctrl_events");
    t.ctrl_total = parse_count(cells[5], row_no, "ctrl_total");
    try {
      t.validate();
    } catch (const InputError& e) {
      throw InputError("row " + std::to_string(row_no) + ": " + e.what());
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

Dataset parse_precomputed_csv(std::istream& in) {
  const auto rows = read_rows(in, kEffectsHeader);
  Dataset d;
  d.estimates.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::size_t row_no = r + 1;
    EffectEstimate e;
    e.study_label = cells[0];
    e.group_label = cells[1];
    e.y = parse_real(cells[2], row_no, "y");
    e.se = parse_real(cells[3], row_no, "se");
    if (!std::isfinite(e.y)) cell_error(row_no, "y", "must be finite");
    if (!(e.se > 0.0) || !std::isfinite(e.se)) {
      cell_error(row_no, "se", "must be finite and positive");
    }
    d.estimates.push_back(std::move(e));
  }
  return d;
}

namespace {

template <typename T>
T load_file(const std::string& path, T (*parse)(std::istream&)) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file '" + path + "'");
  try {
    return parse(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace

std::vector<TwoByTwoTable> load_counts_csv(const std::string& path) {
  return load_file(path, parse_counts_csv);
}

Dataset load_precomputed_csv(const std::string& path) {
  return load_file(path, parse_precomputed_csv);
}

void write_counts_csv(std::ostream& out, const std::vector<TwoByTwoTable>& tables) {
  out << "study,patients,treat_events,treat_total,ctrl_events,ctrl_total\n";
  for (const auto& t : tables) {
    out << t.study_label << ',' << t.group_label << ',' << t.treat_events << ','
        << t.treat_total << ',' << t.ctrl_events << ',' << t.ctrl_total << '\n';
  }
}

void write_effects_csv(std::ostream& out, const Dataset& data) {
  out << "study,patients,y,se\n";
  for (const auto& e : data.estimates) {
    out << e.study_label << ',' << e.group_label << ',' << format_g17(e.y) << ','
        << format_g17(e.se) << '\n';
  }
}

std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace metamix
