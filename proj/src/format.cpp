#include "bwt/format.hpp"

#include <cmath>
#include <cstdio>

namespace bwt {

std::string format_g(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string json_number(double value) {
  if (!std::isfinite(value)) return "\"" + format_g(value, 17) + "\"";
  return format_g(value, 17);
}

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_complex(Complex z) {
  return "{\"re\": " + json_number(z.real()) + ", \"im\": " + json_number(z.imag()) + "}";
}

}  // namespace bwt
