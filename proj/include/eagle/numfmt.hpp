#pragma once

#include <string>
#include <string_view>

namespace eagle {

/// Canonical rendering of a coordinate or generic value: decimal with at
/// most 3 fractional digits, trailing zeros trimmed ("0.57", never
/// "0.570"; integers render bare: "16").
std::string format_number(double value);

/// Canonical rendering of a timestamp. `decimal_style` preserves the
/// source precision: when set, integral values keep one fractional digit
/// ("5.0"); when clear, they render bare ("12"). Non-integral values
/// render the same either way ("3.66").
std::string format_time(double value, bool decimal_style);

/// "<a,b>" time-boundary token in canonical time format.
std::string format_interval_token(double start, double end,
                                  bool start_decimal, bool end_decimal);

/// Strict parse of a canonical number. Returns false when `text` is not
/// entirely a decimal number. `had_decimal_point` reports whether the
/// source carried a '.' (the style flag round-tripped by format_time).
bool parse_number(std::string_view text, double* value,
                  bool* had_decimal_point = nullptr);

}  // namespace eagle
