#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "tvcmoga/errors.hpp"

namespace tvc {

// Minimal deterministic SVG 1.1 emission: fixed canvas, labeled axis ticks,
// polyline / scatter / bar series. Identical inputs produce identical bytes.

namespace svg {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Marker {
    std::string label;
    double x;
    double y;
};

inline std::string num(double v) {
    if (!std::isfinite(v))
        return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

inline std::string short_num(double v) {
    if (!std::isfinite(v))
        return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

// 1/2/5-decade tick spacing covering [lo, hi] with ~n steps.
inline std::vector<double> nice_ticks(double lo, double hi, int n = 6) {
    if (!(hi > lo)) {
        double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
        lo -= pad;
        hi += pad;
    }
    double raw = (hi - lo) / std::max(1, n);
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
    step *= mag;
    std::vector<double> ticks;
    double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + 0.5 * step; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

inline const char* series_color(size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    return palette[i % 6];
}

class Canvas {
public:
    static constexpr double width = 820.0;
    static constexpr double height = 560.0;
    static constexpr double margin_left = 82.0;
    static constexpr double margin_right = 30.0;
    static constexpr double margin_top = 46.0;
    static constexpr double margin_bottom = 64.0;

    Canvas(std::string title, std::string x_label, std::string y_label,
           double x_lo, double x_hi, double y_lo, double y_hi)
        : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi) {
        if (!(x_hi_ > x_lo_)) {
            x_lo_ -= 0.5;
            x_hi_ += 0.5;
        }
        if (!(y_hi_ > y_lo_)) {
            double pad = y_lo_ == 0.0 ? 1.0 : std::abs(y_lo_) * 0.5;
            y_lo_ -= pad;
            y_hi_ += pad;
        }
        body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
                 num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " +
                 num(width) + " " + num(height) + "\">\n";
        body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        body_ += "<text x=\"" + num(width / 2) +
                 "\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                 "font-size=\"17\">" +
                 title + "</text>\n";
        draw_axes(x_label, y_label);
    }

    double px(double x) const {
        return margin_left + (x - x_lo_) / (x_hi_ - x_lo_) *
                                 (width - margin_left - margin_right);
    }

    double py(double y) const {
        return height - margin_bottom -
               (y - y_lo_) / (y_hi_ - y_lo_) * (height - margin_top - margin_bottom);
    }

    void polyline(const Series& s, size_t color_index) {
        if (s.points.empty())
            return;
        body_ += "<polyline fill=\"none\" stroke=\"";
        body_ += series_color(color_index);
        body_ += "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points)
            body_ += num(px(x)) + "," + num(py(y)) + " ";
        body_ += "\"/>\n";
    }

    void scatter(const Series& s, size_t color_index, double radius = 3.0) {
        for (const auto& [x, y] : s.points)
            body_ += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) +
                     "\" r=\"" + num(radius) + "\" fill=\"" +
                     series_color(color_index) + "\"/>\n";
    }

    void marker(const Marker& m) {
        body_ += "<circle cx=\"" + num(px(m.x)) + "\" cy=\"" + num(py(m.y)) +
                 "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
        body_ += "<text x=\"" + num(px(m.x) + 8) + "\" y=\"" + num(py(m.y) - 8) +
                 "\" font-family=\"sans-serif\" font-size=\"14\">" + m.label +
                 "</text>\n";
    }

    void bar(double x_center, double bar_width, double y_value, size_t color_index) {
        double x0 = px(x_center) - bar_width / 2.0;
        double y_top = py(y_value);
        double y_base = py(std::max(y_lo_, 0.0));
        if (y_top > y_base)
            std::swap(y_top, y_base);
        body_ += "<rect x=\"" + num(x0) + "\" y=\"" + num(y_top) + "\" width=\"" +
                 num(bar_width) + "\" height=\"" + num(y_base - y_top) +
                 "\" fill=\"" + series_color(color_index) + "\"/>\n";
    }

    void legend(const std::vector<std::string>& names) {
        double x = margin_left + 12.0;
        double y = margin_top + 8.0;
        for (size_t i = 0; i < names.size(); ++i) {
            body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y + 18.0 * i) +
                     "\" width=\"12\" height=\"12\" fill=\"" + series_color(i) +
                     "\"/>\n";
            body_ += "<text x=\"" + num(x + 18) + "\" y=\"" + num(y + 18.0 * i + 11) +
                     "\" font-family=\"sans-serif\" font-size=\"13\">" + names[i] +
                     "</text>\n";
        }
    }

    // Deterministic custom x tick labels (e.g. categorical PS values).
    // Sits below the numeric tick row.
    void x_tick_label(double x, const std::string& label) {
        body_ += "<text x=\"" + num(px(x)) + "\" y=\"" +
                 num(height - margin_bottom + 36) +
                 "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                 "font-size=\"12\">" +
                 label + "</text>\n";
    }

    std::string finish() { return body_ + "</svg>\n"; }

private:
    void draw_axes(const std::string& x_label, const std::string& y_label) {
        double x0 = margin_left, x1 = width - margin_right;
        double y0 = height - margin_bottom, y1 = margin_top;
        body_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" +
                 num(x1) + "\" y2=\"" + num(y0) + "\" stroke=\"black\"/>\n";
        body_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" +
                 num(x0) + "\" y2=\"" + num(y1) + "\" stroke=\"black\"/>\n";
        for (double t : nice_ticks(x_lo_, x_hi_)) {
            if (t < x_lo_ - 1e-12 || t > x_hi_ + 1e-12)
                continue;
            body_ += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(y0) + "\" x2=\"" +
                     num(px(t)) + "\" y2=\"" + num(y0 + 5) + "\" stroke=\"black\"/>\n";
            body_ += "<text x=\"" + num(px(t)) + "\" y=\"" + num(y0 + 20) +
                     "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                     "font-size=\"12\">" +
                     short_num(t) + "</text>\n";
        }
        for (double t : nice_ticks(y_lo_, y_hi_)) {
            if (t < y_lo_ - 1e-12 || t > y_hi_ + 1e-12)
                continue;
            body_ += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py(t)) +
                     "\" x2=\"" + num(x0) + "\" y2=\"" + num(py(t)) +
                     "\" stroke=\"black\"/>\n";
            body_ += "<text x=\"" + num(x0 - 9) + "\" y=\"" + num(py(t) + 4) +
                     "\" text-anchor=\"end\" font-family=\"sans-serif\" "
                     "font-size=\"12\">" +
                     short_num(t) + "</text>\n";
        }
        body_ += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(height - 16) +
                 "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                 "font-size=\"14\">" +
                 x_label + "</text>\n";
        body_ += "<text x=\"20\" y=\"" + num((y0 + y1) / 2) +
                 "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                 "font-size=\"14\" transform=\"rotate(-90 20 " +
                 num((y0 + y1) / 2) + ")\">" + y_label + "</text>\n";
    }

    double x_lo_, x_hi_, y_lo_, y_hi_;
    std::string body_;
};

} // namespace svg

// theta(t) or phi(t) line chart from trajectory-like series.
inline std::string line_chart_svg(const std::string& title,
                                  const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<svg::Series>& series) {
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool first = true;
    for (const svg::Series& s : series)
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_lo = x_hi = x;
                y_lo = y_hi = y;
                first = false;
            }
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    if (first)
        throw InvalidInput("line_chart_svg: no data");
    svg::Canvas canvas(title, x_label, y_label, x_lo, x_hi, y_lo, y_hi);
    for (size_t i = 0; i < series.size(); ++i)
        canvas.polyline(series[i], i);
    if (series.size() > 1) {
        std::vector<std::string> names;
        for (const svg::Series& s : series)
            names.push_back(s.name);
        canvas.legend(names);
    }
    return canvas.finish();
}

// Pareto scatter with labeled A/B/C markers.
inline std::string pareto_svg(const std::string& title,
                              const std::vector<std::pair<double, double>>& points,
                              const std::vector<svg::Marker>& markers) {
    if (points.empty())
        throw InvalidInput("pareto_svg: empty front");
    double x_lo = points[0].first, x_hi = x_lo;
    double y_lo = points[0].second, y_hi = y_lo;
    for (const auto& [x, y] : points) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    svg::Canvas canvas(title, "OF1 [rad s]", "OF2 [rad s]", x_lo, x_hi, y_lo, y_hi);
    canvas.scatter(svg::Series{"front", points}, 0);
    for (const svg::Marker& m : markers)
        canvas.marker(m);
    return canvas.finish();
}

// Grouped bars: one group per PS value, one bar per CF value.
inline std::string matrix_bar_svg(const std::string& title,
                                  const std::vector<std::vector<double>>& values,
                                  const std::vector<int>& ps_values,
                                  const std::vector<double>& cf_values,
                                  const std::string& y_label) {
    if (values.empty() || values.size() != ps_values.size())
        throw InvalidInput("matrix_bar_svg: matrix/ps size mismatch");
    double y_hi = 0.0;
    for (const auto& row : values)
        for (double v : row)
            if (std::isfinite(v))
                y_hi = std::max(y_hi, v);
    if (y_hi <= 0.0)
        y_hi = 1.0;
    svg::Canvas canvas(title, "population size", y_label, -0.5,
                       static_cast<double>(ps_values.size()) - 0.5, 0.0,
                       y_hi * 1.08);
    const double group_width = 0.72;
    const size_t n_cf = cf_values.size();
    for (size_t pi = 0; pi < ps_values.size(); ++pi) {
        for (size_t ci = 0; ci < n_cf; ++ci) {
            double v = values[pi][ci];
            if (!std::isfinite(v))
                continue;
            double offset = group_width * (static_cast<double>(ci) + 0.5) /
                                static_cast<double>(n_cf) -
                            group_width / 2.0;
            double bar_px = group_width / static_cast<double>(n_cf) *
                            (svg::Canvas::width - svg::Canvas::margin_left -
                             svg::Canvas::margin_right) /
                            static_cast<double>(ps_values.size()) * 0.9;
            canvas.bar(static_cast<double>(pi) + offset, bar_px, v, ci);
        }
        canvas.x_tick_label(static_cast<double>(pi),
                            std::to_string(ps_values[pi]));
    }
    std::vector<std::string> names;
    for (double cf : cf_values)
        names.push_back("cf " + svg::short_num(cf));
    canvas.legend(names);
    return canvas.finish();
}

} // namespace tvc
