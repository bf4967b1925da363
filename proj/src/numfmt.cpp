#include "eagle/numfmt.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace eagle {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  std::string s(buf);
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    auto last = s.find_last_not_of('0');
    if (last == dot) last = dot - 1;
    s.erase(last + 1);
  }
  if (s == "-0") s = "0";
  return s;
}

std::string format_time(double value, bool decimal_style) {
  std::string s = format_number(value);
  if (decimal_style && s.find('.') == std::string::npos) s += ".0";
  return s;
}

std::string format_interval_token(double start, double end,
                                  bool start_decimal, bool end_decimal) {
  return "<" + format_time(start, start_decimal) + "," +
         format_time(end, end_decimal) + ">";
}

bool parse_number(std::string_view text, double* value,
                  bool* had_decimal_point) {
  if (text.empty() || text.size() >= 63) return false;
  char buf[64];
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  char* end = nullptr;
  double v = std::strtod(buf, &end);
  if (end != buf + text.size()) return false;
  *value = v;
  if (had_decimal_point) {
    *had_decimal_point = text.find('.') != std::string_view::npos;
  }
  return true;
}

}  // namespace eagle
