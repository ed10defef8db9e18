#pragma once

#include <string>

namespace obro {

/// 12 significant digits; negative zero prints as 0.
std::string csv_number(double v);

}  // namespace obro
