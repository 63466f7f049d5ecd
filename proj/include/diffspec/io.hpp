#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "diffspec/dsmi.hpp"
#include "diffspec/error.hpp"
#include "diffspec/spectrum.hpp"
#include "diffspec/types.hpp"

namespace diffspec::io {

// Malformed cloud file. line() is 1-based (the header is line 1), 0 when the
// problem is not tied to a line.
class CsvError : public InvalidInput {
 public:
  CsvError(std::size_t line, const std::string& what)
      : InvalidInput(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Cloud CSV: UTF-8, header first, feature columns then an optional final
// `label` column holding nonnegative integers. Blank lines are skipped.
// Throws CsvError on ragged rows, unparsable or non-finite values, and when
// more than max_points rows are present.
PointCloud read_cloud_csv(std::istream& in, std::size_t max_points = kDefaultMaxPoints);
PointCloud read_cloud_csv_file(const std::string& path,
                               std::size_t max_points = kDefaultMaxPoints);

// Header f0..f{D-1}[,label]; values in shortest round-trip form.
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// Report objects. Every resolved parameter is present; keys that do not apply
// to the method are null.
nlohmann::ordered_json entropy_report_json(const EntropyReport& report,
                                           std::optional<std::uint64_t> seed = std::nullopt);
nlohmann::ordered_json mi_report_json(const MIReport& report);

}  // namespace diffspec::io
