#include "obro/csv.hpp"

#include <fmt/format.h>

namespace obro {

std::string csv_number(double v) {
  if (v == 0.0) v = 0.0;
  return fmt::format("{:.12g}", v);
}

}  // namespace obro
