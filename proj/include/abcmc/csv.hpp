#pragma once

#include <string>
#include <vector>

namespace abcmc {

// Shortest representation that round-trips a double (17 significant
// digits, '.' decimal separator, C locale).
std::string format_g17(double value);

std::string join_csv(const std::vector<std::string>& fields);

} // namespace abcmc
