#pragma once

#include "tsfm/series.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tsfm {

enum class DatasetFormat { jsonl, csv };

/// ".csv" maps to csv, anything else to jsonl.
DatasetFormat format_from_path(const std::string& path);

/// JSONL: one {"id", "start", "freq", "target": [number|null, ...]} object per line.
/// CSV: long format with header item_id,timestamp,target; rows of one item must be
/// contiguous and on a uniform grid, whose frequency is inferred unless given.
/// Empty/null targets become missing values.
std::vector<TimeSeries> load_dataset(const std::string& path, DatasetFormat format,
                                     std::optional<Frequency> csv_freq = std::nullopt);
std::vector<TimeSeries> load_dataset(const std::string& path);

std::vector<TimeSeries> read_jsonl(std::istream& in);
std::vector<TimeSeries> read_csv(std::istream& in, std::optional<Frequency> freq = std::nullopt);

std::string to_jsonl_line(const TimeSeries& series);
void write_jsonl(std::ostream& out, const std::vector<TimeSeries>& series);

} // namespace tsfm
