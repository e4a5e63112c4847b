#include "abcmc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <ostream>
#include <vector>

namespace abcmc {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 36.0, kBottom = 52.0;

struct Axis {
    double lo = 0.0, hi = 1.0;

    static Axis from(std::span<const double> values) {
        Axis axis;
        bool any = false;
        for (double v : values) {
            if (!std::isfinite(v)) continue;
            if (!any) {
                axis.lo = axis.hi = v;
                any = true;
            } else {
                axis.lo = std::min(axis.lo, v);
                axis.hi = std::max(axis.hi, v);
            }
        }
        if (!any) return axis;
        double pad = 0.05 * (axis.hi - axis.lo);
        if (pad == 0.0) pad = axis.lo == 0.0 ? 1.0 : 0.1 * std::fabs(axis.lo);
        axis.lo -= pad;
        axis.hi += pad;
        return axis;
    }
};

double map_x(const Axis& axis, double v) {
    return kLeft + (v - axis.lo) / (axis.hi - axis.lo) * (kWidth - kLeft - kRight);
}

double map_y(const Axis& axis, double v) {
    return kHeight - kBottom - (v - axis.lo) / (axis.hi - axis.lo) * (kHeight - kTop - kBottom);
}

std::string num(double v) {
    char buffer[32];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), v, std::chars_format::general, 4);
    return std::string(buffer, result.ptr);
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void open_svg(std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
}

void draw_frame(std::ostream& out, const Axis& x_axis, const Axis& y_axis,
                const std::string& x_label, const std::string& y_label, const std::string& title) {
    const double x0 = kLeft, x1 = kWidth - kRight;
    const double y0 = kHeight - kBottom, y1 = kTop;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x_axis.lo + (x_axis.hi - x_axis.lo) * t / 4.0;
        const double px = map_x(x_axis, fx);
        out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 5
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << y0 + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
        const double fy = y_axis.lo + (y_axis.hi - y_axis.lo) * t / 4.0;
        const double py = map_y(y_axis, fy);
        out << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\"" << py
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << num(fy) << "</text>\n";
    }
    out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << (y0 + y1) / 2 << "\" font-size=\"13\" text-anchor=\"middle\""
        << " transform=\"rotate(-90 16 " << (y0 + y1) / 2 << ")\">" << escape(y_label)
        << "</text>\n";
    out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">"
        << escape(title) << "</text>\n";
}

} // namespace

void write_svg_scatter(std::ostream& out, std::span<const double> x, std::span<const double> y,
                       const std::string& x_label, const std::string& y_label,
                       const std::string& title) {
    const Axis x_axis = Axis::from(x);
    const Axis y_axis = Axis::from(y);
    open_svg(out);
    draw_frame(out, x_axis, y_axis, x_label, y_label, title);
    const std::size_t count = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        out << "<circle cx=\"" << map_x(x_axis, x[i]) << "\" cy=\"" << map_y(y_axis, y[i])
            << "\" r=\"2\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
    }
    out << "</svg>\n";
}

void write_svg_histogram(std::ostream& out, std::span<const double> values, std::size_t bins,
                         const std::string& x_label, const std::string& title) {
    std::vector<double> finite;
    finite.reserve(values.size());
    for (double v : values)
        if (std::isfinite(v)) finite.push_back(v);

    if (bins == 0) bins = 1;
    Axis x_axis = Axis::from(finite);
    std::vector<double> counts(bins, 0.0);
    if (!finite.empty()) {
        const double width = (x_axis.hi - x_axis.lo) / static_cast<double>(bins);
        for (double v : finite) {
            auto bin = static_cast<std::size_t>((v - x_axis.lo) / width);
            counts[std::min(bin, bins - 1)] += 1.0;
        }
    }
    Axis y_axis{0.0, std::max(1.0, *std::max_element(counts.begin(), counts.end())) * 1.05};

    open_svg(out);
    draw_frame(out, x_axis, y_axis, x_label, "count", title);
    const double bin_width = (x_axis.hi - x_axis.lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        if (counts[b] == 0.0) continue;
        const double px0 = map_x(x_axis, x_axis.lo + bin_width * static_cast<double>(b));
        const double px1 = map_x(x_axis, x_axis.lo + bin_width * static_cast<double>(b + 1));
        const double py = map_y(y_axis, counts[b]);
        out << "<rect x=\"" << px0 << "\" y=\"" << py << "\" width=\"" << px1 - px0
            << "\" height=\"" << map_y(y_axis, 0.0) - py
            << "\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
    }
    out << "</svg>\n";
}

} // namespace abcmc
