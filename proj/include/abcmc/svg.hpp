#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace abcmc {

// Static SVG plots with no rendering dependencies: one marker element per
// data point, labeled axes, nothing interactive. Non-finite points are
// skipped.

void write_svg_scatter(std::ostream& out, std::span<const double> x, std::span<const double> y,
                       const std::string& x_label, const std::string& y_label,
                       const std::string& title);

void write_svg_histogram(std::ostream& out, std::span<const double> values, std::size_t bins,
                         const std::string& x_label, const std::string& title);

} // namespace abcmc
