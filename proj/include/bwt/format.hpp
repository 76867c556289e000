#pragma once

#include <string>

#include "bwt/transfer.hpp"

namespace bwt {

/// printf("%.*g") with the given number of significant digits. Non-finite
/// values render as "inf", "-inf" or "nan".
std::string format_g(double value, int digits);

inline std::string csv_number(double value) { return format_g(value, 12); }

/// JSON number with 17 significant digits; non-finite values become the
/// quoted sentinel strings "inf", "-inf", "nan".
std::string json_number(double value);

std::string json_string(std::string_view s);

/// {"re": x, "im": y}
std::string json_complex(Complex z);

}  // namespace bwt
