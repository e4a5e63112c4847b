#include "abcmc/csv.hpp"

#include <charconv>

namespace abcmc {

std::string format_g17(double value) {
    // locale-independent %.17g equivalent
    char buffer[40];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

std::string join_csv(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) line += ',';
        line += fields[i];
    }
    return line;
}

} // namespace abcmc
