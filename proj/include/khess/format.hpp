#pragma once

#include <locale>
#include <sstream>
#include <string>

namespace khess {

/// Locale-independent %.{digits}g rendering ('.' decimal separator).
inline std::string format_number(double value, int digits = 17) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(digits);
  out << value;
  return out.str();
}

}  // namespace khess
