#pragma once

#include <optional>
#include <string>

#include "volgram/experiments.hpp"
#include "volgram/posterior.hpp"
#include "volgram/selection.hpp"

namespace volgram {

// CSV ingestion of a real or exported series. Columns are looked up by
// header name; a name that is not present but parses as a nonnegative
// integer is treated as a 0-based column index.
struct IngestSpec {
  enum class Missing { drop, error };

  std::string path;
  std::optional<std::string> time_column;  // absent: rows are equispaced
  std::string value_column = "value";
  Missing missing = Missing::drop;
  bool rescale = true;        // map the observed span to [0, 1]
  bool strict_times = false;  // reject non-equispaced time stamps
  bool log_transform = false;
};

// Reads the file into an ObservedPath. Needs at least 3 usable rows and
// finite values. When a time column is present the gaps must be equispaced
// to a relative deviation of 1e-6; violations are an error in strict mode
// and a logged warning otherwise. Throws DataError with the offending
// row/column on parse failures.
ObservedPath ingest(const IngestSpec& spec);

// Canonical text artifacts. Doubles are printed with 17 significant digits
// so export -> ingest round-trips reproduce values exactly.
std::string format_g17(double v);

std::string path_csv(const ObservedPath& path);                  // t,x
std::string estimate_csv(const DispersionEstimate& est);
std::string estimate_json(const DispersionEstimate& est);
std::string selection_csv(const SelectionResult& result);        // N,score
std::string selection_json(const SelectionResult& result);
std::string contraction_csv(const ContractionReport& report);    // n,N,q
std::string contraction_json(const ContractionReport& report);

// Write-temp-then-rename so partially written files are never observed.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace volgram
