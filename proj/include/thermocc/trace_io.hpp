#pragma once

#include <filesystem>
#include <iosfwd>

#include "thermocc/types.hpp"

namespace thermocc {

// Trace CSV: UTF-8, header "t_seconds,temp_c,kind", one row per sample,
// '.' decimal separator, LF line endings, values with 6 decimal places.

void export_trace(const TemperatureTrace& trace, std::ostream& out);
void export_trace(const TemperatureTrace& trace, const std::filesystem::path& path);

/// Parse a trace CSV. Malformed header, non-monotonic time, non-numeric or
/// missing fields raise Error with the offending line number.
TemperatureTrace import_trace(std::istream& in);
TemperatureTrace import_trace(const std::filesystem::path& path);

}  // namespace thermocc
