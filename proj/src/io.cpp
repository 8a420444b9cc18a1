#include "volgram/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "volgram/errors.hpp"

namespace volgram {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

// Column lookup: header name first, then a nonnegative integer as 0-based
// index.
std::size_t resolve_column(const std::vector<std::string>& header,
                           const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (trim(header[i]) == name) return i;
  std::size_t index = 0;
  const auto [ptr, ec] =
      std::from_chars(name.data(), name.data() + name.size(), index);
  if (ec == std::errc() && ptr == name.data() + name.size() &&
      index < header.size())
    return index;
  throw DataError("column '" + name + "' not found in header");
}

// Parses a numeric cell. Returns false for an empty/missing cell; throws
// DataError for garbage.
bool parse_cell(const std::string& raw, std::size_t row, std::size_t col,
                double& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw DataError("row " + std::to_string(row) + ", column " +
                    std::to_string(col) + ": cannot parse '" + s + "'");
  if (std::isnan(v)) return false;  // treated as missing
  out = v;
  return true;
}

}  // namespace

ObservedPath ingest(const IngestSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw DataError("cannot open '" + spec.path + "'");

  std::string line;
  if (!std::getline(in, line))
    throw DataError("'" + spec.path + "' is empty");
  const std::vector<std::string> header = split_fields(line);

  const std::size_t value_col = resolve_column(header, spec.value_column);
  std::size_t time_col = 0;
  const bool has_time = spec.time_column.has_value();
  if (has_time) time_col = resolve_column(header, *spec.time_column);

  std::vector<double> times;
  std::vector<double> values;
  std::size_t row = 1;  // header is row 0
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      ++row;
      continue;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size())
      throw DataError("row " + std::to_string(row) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));

    double value = 0.0;
    const bool have_value = parse_cell(fields[value_col], row, value_col, value);
    double time = 0.0;
    bool have_time_cell = true;
    if (has_time)
      have_time_cell = parse_cell(fields[time_col], row, time_col, time);

    if (!have_value || !have_time_cell) {
      if (spec.missing == IngestSpec::Missing::error)
        throw DataError("row " + std::to_string(row) + ": missing value");
      ++row;
      continue;  // drop
    }
    if (!std::isfinite(value))
      throw DataError("row " + std::to_string(row) + ": non-finite value");

    if (has_time) times.push_back(time);
    values.push_back(value);
    ++row;
  }

  if (values.size() < 3)
    throw DataError("'" + spec.path + "': need at least 3 usable rows, got " +
                    std::to_string(values.size()));

  if (spec.log_transform) {
    for (double& v : values) {
      if (!(v > 0.0))
        throw DataError("log transform requires positive values");
      v = std::log(v);
    }
  }

  double horizon = 1.0;
  if (has_time) {
    const std::size_t n = times.size() - 1;
    const double span = times.back() - times.front();
    if (!(span > 0.0)) throw DataError("time column is not increasing");
    const double mean_gap = span / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = times[i + 1] - times[i];
      if (!(gap > 0.0))
        throw DataError("time column is not strictly increasing at row " +
                        std::to_string(i + 2));
      const double dev = std::abs(gap - mean_gap) / mean_gap;
      if (dev > 1e-6) {
        if (spec.strict_times)
          throw DataError("non-equispaced times: gap " + format_g17(gap) +
                          " after observation " + std::to_string(i) +
                          " deviates from mean gap " + format_g17(mean_gap));
        std::cerr << "volgram: warning: times are not equispaced (first "
                     "offending gap after observation "
                  << i << "); proceeding with rows as equispaced\n";
        break;
      }
    }
    horizon = spec.rescale ? 1.0 : span;
  } else {
    std::cerr << "volgram: note: no time column; assuming rows are "
                 "equispaced\n";
  }

  ObservedPath path;
  path.values = std::move(values);
  path.horizon = horizon;
  return path;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string path_csv(const ObservedPath& path) {
  std::string out = "t,x\n";
  const std::size_t n = path.increments();
  for (std::size_t i = 0; i <= n; ++i) {
    const double t =
        path.horizon * static_cast<double>(i) / static_cast<double>(n);
    out += format_g17(t);
    out += ',';
    out += format_g17(path.values[i]);
    out += '\n';
  }
  return out;
}

std::string estimate_csv(const DispersionEstimate& est) {
  std::string out = "bin_start,bin_end,post_mean,lower,upper\n";
  for (std::size_t k = 0; k < est.part.bins; ++k) {
    out += format_g17(est.part.edges[k]);
    out += ',';
    out += format_g17(est.part.edges[k + 1]);
    out += ',';
    out += format_g17(est.mean[k]);
    out += ',';
    out += format_g17(est.lower[k]);
    out += ',';
    out += format_g17(est.upper[k]);
    out += '\n';
  }
  return out;
}

std::string estimate_json(const DispersionEstimate& est) {
  nlohmann::ordered_json j;
  j["level"] = est.level;
  j["band_type"] = "marginal";  // per-bin intervals, not simultaneous
  auto bins = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < est.part.bins; ++k) {
    bins.push_back({{"bin_start", est.part.edges[k]},
                    {"bin_end", est.part.edges[k + 1]},
                    {"post_mean", est.mean[k]},
                    {"lower", est.lower[k]},
                    {"upper", est.upper[k]}});
  }
  j["bins"] = bins;
  return j.dump(2) + "\n";
}

std::string selection_csv(const SelectionResult& result) {
  std::string out = "N,score\n";
  for (std::size_t i = 0; i < result.grid.size(); ++i) {
    out += std::to_string(result.grid[i]);
    out += ',';
    out += format_g17(result.scores[i]);
    out += '\n';
  }
  return out;
}

std::string selection_json(const SelectionResult& result) {
  nlohmann::ordered_json j;
  j["criterion"] = result.criterion == Criterion::dic ? "dic" : "ml";
  j["grid"] = result.grid;
  j["scores"] = result.scores;
  j["best"] = result.best;
  return j.dump(2) + "\n";
}

std::string contraction_csv(const ContractionReport& report) {
  std::string out = "n,N,q\n";
  for (const ContractionRow& row : report.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.bins);
    out += ',';
    out += format_g17(row.q);
    out += '\n';
  }
  return out;
}

std::string contraction_json(const ContractionReport& report) {
  nlohmann::ordered_json j;
  j["norm"] = report.norm == Norm::l2 ? "l2" : "sup";
  j["lambda"] = report.lambda;
  j["slope"] = report.pooled.slope;
  j["slope_se"] = report.pooled.se;
  j["seed"] = report.seed;
  if (report.per_realisation.size() > 1) {
    auto slopes = nlohmann::ordered_json::array();
    for (const SlopeFit& fit : report.per_realisation)
      slopes.push_back({{"slope", fit.slope}, {"se", fit.se}});
    j["per_realisation"] = slopes;
  }
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp + "'");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw DataError("cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace volgram
