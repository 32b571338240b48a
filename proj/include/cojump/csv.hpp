#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cojump/types.hpp"

namespace cojump {

enum class SeriesFormat { levels, log_levels, returns };

SeriesFormat series_format_from_string(const std::string& s);

/// Column layout of an input file: 0-based indices, time optional (< 0 for
/// none). When a time column is present, spacing inside a day must be
/// regular within 1% of the modal spacing, otherwise the day is a gap error.
struct CsvColumns {
  int day = 0;
  int time = -1;
  int x1 = 1;
  int x2 = 2;
  bool header = true;
};

struct DayRecord {
  std::string label;
  IncrementSeries series;
};

/// One day per contiguous group of rows with the same day key. Each day is
/// mapped onto [0, day_horizon] with a regular grid.
std::vector<DayRecord> ingest_csv(const std::string& path, SeriesFormat format,
                                  const CsvColumns& columns, double day_horizon = 1.0);
std::vector<DayRecord> ingest_csv_stream(std::istream& in, SeriesFormat format,
                                         const CsvColumns& columns, double day_horizon = 1.0);

}  // namespace cojump
