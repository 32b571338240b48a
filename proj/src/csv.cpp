#include "cojump/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace cojump {

SeriesFormat series_format_from_string(const std::string& s) {
  if (s == "levels") return SeriesFormat::levels;
  if (s == "log_levels" || s == "log-levels") return SeriesFormat::log_levels;
  if (s == "returns") return SeriesFormat::returns;
  fail(Errc::invalid_argument, "unknown series format '" + s + "'");
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  for (std::string& f : fields) {
    const auto a = f.find_first_not_of(" \t");
    if (a == std::string::npos) {
      f.clear();
      continue;
    }
    const auto b = f.find_last_not_of(" \t");
    f = f.substr(a, b - a + 1);
  }
  return fields;
}

double parse_number(const std::string& field, std::size_t row, int col) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size() || !std::isfinite(v)) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    fail(Errc::parse_error, "row " + std::to_string(row) + ", column " + std::to_string(col) +
                                ": bad number '" + field + "'");
  }
}

struct DayRows {
  std::string label;
  std::vector<double> t, v1, v2;
  bool has_time = false;
};

void check_spacing(const DayRows& day) {
  if (!day.has_time || day.t.size() < 3) return;
  std::vector<double> gaps(day.t.size() - 1);
  for (std::size_t i = 0; i + 1 < day.t.size(); ++i) {
    gaps[i] = day.t[i + 1] - day.t[i];
    if (!(gaps[i] > 0.0))
      fail(Errc::gap_error, "day " + day.label + ": non-increasing time at row offset " +
                                std::to_string(i + 1));
  }
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const double modal = sorted[sorted.size() / 2];
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (std::fabs(gaps[i] - modal) > 0.01 * modal)
      fail(Errc::gap_error, "day " + day.label + ": irregular spacing at row offset " +
                                std::to_string(i + 1) + " (gap " + std::to_string(gaps[i]) +
                                " vs modal " + std::to_string(modal) + ")");
  }
}

DayRecord build_day(const DayRows& day, SeriesFormat format, double horizon) {
  check_spacing(day);
  const std::size_t rows = day.v1.size();
  if (format == SeriesFormat::returns) {
    SamplingGrid grid;
    grid.count = rows;
    grid.horizon = horizon;
    grid.delta = horizon / static_cast<double>(rows);
    return {day.label, IncrementSeries(grid, day.v1, day.v2)};
  }
  if (rows < 2)
    fail(Errc::insufficient_data, "day " + day.label + ": need at least two level rows");
  const double delta = horizon / static_cast<double>(rows - 1);
  return {day.label, IncrementSeries::from_levels(delta, horizon, day.v1, day.v2,
                                                  format == SeriesFormat::log_levels)};
}

}  // namespace

std::vector<DayRecord> ingest_csv_stream(std::istream& in, SeriesFormat format,
                                         const CsvColumns& columns, double day_horizon) {
  if (!(day_horizon > 0.0)) fail(Errc::invalid_argument, "ingest: day horizon must be positive");
  const int max_col = std::max({columns.day, columns.time, columns.x1, columns.x2});
  std::vector<DayRecord> out;
  std::set<std::string> finished;
  DayRows current;
  bool have_day = false;

  auto flush = [&]() {
    if (!have_day) return;
    if (!finished.insert(current.label).second)
      fail(Errc::parse_error, "day '" + current.label + "' appears in non-contiguous groups");
    out.push_back(build_day(current, format, day_horizon));
    current = DayRows{};
    have_day = false;
  };

  std::string line;
  std::size_t row = 0;
  bool skip_header = columns.header;
  while (std::getline(in, line)) {
    ++row;
    if (skip_header) {
      skip_header = false;
      continue;
    }
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_row(line);
    if (static_cast<int>(fields.size()) <= max_col)
      fail(Errc::parse_error, "row " + std::to_string(row) + ": expected at least " +
                                  std::to_string(max_col + 1) + " columns, found " +
                                  std::to_string(fields.size()));
    const std::string& key = fields[static_cast<std::size_t>(columns.day)];
    if (!have_day || key != current.label) {
      flush();
      current.label = key;
      current.has_time = columns.time >= 0;
      have_day = true;
    }
    if (columns.time >= 0)
      current.t.push_back(parse_number(fields[static_cast<std::size_t>(columns.time)], row, columns.time));
    current.v1.push_back(parse_number(fields[static_cast<std::size_t>(columns.x1)], row, columns.x1));
    current.v2.push_back(parse_number(fields[static_cast<std::size_t>(columns.x2)], row, columns.x2));
  }
  flush();
  if (out.empty()) fail(Errc::parse_error, "ingest: no data rows");
  return out;
}

std::vector<DayRecord> ingest_csv(const std::string& path, SeriesFormat format,
                                  const CsvColumns& columns, double day_horizon) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open '" + path + "'");
  return ingest_csv_stream(in, format, columns, day_horizon);
}

}  // namespace cojump
