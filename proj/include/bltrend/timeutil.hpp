#pragma once

#include <string>
#include <string_view>

namespace bltrend {

/// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_now_iso8601();

/// True for "YYYY-MM-DDTHH:MM:SS" followed by optional fractional seconds and "Z".
bool is_utc_timestamp(std::string_view text);

/// Calendar date ("YYYY-MM-DD") of a UTC timestamp; the unit a citation snapshot is compared by.
std::string snapshot_date(std::string_view timestamp);

}  // namespace bltrend
