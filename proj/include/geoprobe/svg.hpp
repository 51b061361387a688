#pragma once

// Static SVG figures: input shapes in black, sample dots, fitted locus in red, excluded points open.

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "primitives.hpp"

namespace geoprobe {

struct SvgFigure {
    std::vector<Circle> shapes;           // stroked black
    std::vector<Ellipse> ellipse_shapes;  // stroked black
    std::vector<Vec2> samples;            // small filled dots
    std::optional<Circle> fitted;         // stroked red
    std::vector<Vec2> excluded;           // open markers
    std::vector<Vec2> excluded_curve;     // open markers along an excluded curve (projected 3D circle)
    std::string axis_label;               // e.g. projection axis for 3D input
};

namespace detail {

inline std::string svg_num(double v) {
    if (std::abs(v) < 5e-5) v = 0.0;
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 4);
    return std::string(buf, res.ptr);
}

struct SvgBox {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    void add(const Vec2& p, double r = 0.0) {
        x0 = std::min(x0, p.x() - r);
        y0 = std::min(y0, p.y() - r);
        x1 = std::max(x1, p.x() + r);
        y1 = std::max(y1, p.y() + r);
    }
    bool empty() const { return !(x0 <= x1); }
};

}  // namespace detail

/// Renders the figure into a square canvas with the y axis pointing up. Output depends only on input.
inline std::string render_svg(const SvgFigure& fig, double size = 600.0) {
    detail::SvgBox box;
    for (const auto& c : fig.shapes) box.add(c.center, c.radius);
    for (const auto& e : fig.ellipse_shapes) box.add(e.center(), std::max(e.a(), e.b()));
    for (const auto& p : fig.samples) box.add(p);
    if (fig.fitted) box.add(fig.fitted->center, fig.fitted->radius);
    for (const auto& p : fig.excluded) box.add(p);
    for (const auto& p : fig.excluded_curve) box.add(p);
    if (box.empty()) box.add({0.0, 0.0}, 1.0);

    const double span = std::max({box.x1 - box.x0, box.y1 - box.y0, 1e-12});
    const double margin = 0.06 * size;
    const double scale = (size - 2.0 * margin) / span;
    const double cx = 0.5 * (box.x0 + box.x1), cy = 0.5 * (box.y0 + box.y1);
    auto X = [&](double x) { return detail::svg_num(0.5 * size + (x - cx) * scale); };
    auto Y = [&](double y) { return detail::svg_num(0.5 * size - (y - cy) * scale); };
    auto L = [&](double len) { return detail::svg_num(len * scale); };
    const std::string s = detail::svg_num(size);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + s + "\" height=\"" + s + "\" viewBox=\"0 0 " + s +
           " " + s + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& c : fig.shapes)
        out += "<circle cx=\"" + X(c.center.x()) + "\" cy=\"" + Y(c.center.y()) + "\" r=\"" + L(c.radius) +
               "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    for (const auto& e : fig.ellipse_shapes) {
        const double deg = -e.rotation() * 180.0 / std::numbers::pi;
        out += "<ellipse cx=\"" + X(e.center().x()) + "\" cy=\"" + Y(e.center().y()) + "\" rx=\"" + L(e.a()) +
               "\" ry=\"" + L(e.b()) + "\" transform=\"rotate(" + detail::svg_num(deg) + " " + X(e.center().x()) +
               " " + Y(e.center().y()) + ")\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
    for (const auto& p : fig.samples)
        out += "<circle cx=\"" + X(p.x()) + "\" cy=\"" + Y(p.y()) + "\" r=\"1.2\" fill=\"#333333\"/>\n";
    if (fig.fitted)
        out += "<circle cx=\"" + X(fig.fitted->center.x()) + "\" cy=\"" + Y(fig.fitted->center.y()) + "\" r=\"" +
               L(fig.fitted->radius) + "\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";
    for (const auto& p : fig.excluded_curve)
        out += "<circle cx=\"" + X(p.x()) + "\" cy=\"" + Y(p.y()) +
               "\" r=\"2\" fill=\"white\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
    for (const auto& p : fig.excluded)
        out += "<circle cx=\"" + X(p.x()) + "\" cy=\"" + Y(p.y()) +
               "\" r=\"4\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    if (!fig.axis_label.empty())
        out += "<text x=\"" + detail::svg_num(margin) + "\" y=\"" + detail::svg_num(size - 0.3 * margin) +
               "\" font-family=\"sans-serif\" font-size=\"14\">" + fig.axis_label + "</text>\n";
    out += "</svg>\n";
    return out;
}

/// Orthographic projection dropping the given axis (0 = x, 1 = y, 2 = z).
inline Vec2 project_along_axis(const Vec3& p, int axis) {
    switch (axis) {
        case 0: return {p.y(), p.z()};
        case 1: return {p.x(), p.z()};
        default: return {p.x(), p.y()};
    }
}

}  // namespace geoprobe
