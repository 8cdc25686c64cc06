#include "fstsp/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "fstsp/error.hpp"

namespace fstsp {

namespace {

constexpr double kScale = 60.0;  // px per mile
constexpr double kMargin = 30.0;

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

}  // namespace

std::string plot_svg(const Instance& inst, const Schedule& s) {
    const auto& pts = inst.coords();
    if (pts.empty()) throw ParameterError("instance has no coordinates to plot");

    // the square region plus anything outside it (depot d sits below)
    double x0 = 0, x1 = 8, y0 = 0, y1 = 8;
    for (const Point& p : pts) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double w = (x1 - x0) * kScale + 2 * kMargin;
    const double h = (y1 - y0) * kScale + 2 * kMargin;
    auto sx = [&](double x) { return px(kMargin + (x - x0) * kScale); };
    auto sy = [&](double y) { return px(kMargin + (y1 - y) * kScale); };
    auto at = [&](int v) { return sx(pts[v].x) + "," + sy(pts[v].y); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(w) << "\" height=\"" << px(h) << "\">\n";
    out << "<rect class=\"region\" x=\"" << sx(0) << "\" y=\"" << sy(8) << "\" width=\"" << px(8 * kScale)
        << "\" height=\"" << px(8 * kScale) << "\" fill=\"none\" stroke=\"#bbb\"/>\n";

    out << "<polyline class=\"truck\" fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.route.size(); ++i) out << (i ? " " : "") << at(s.route[i]);
    out << "\"/>\n";
    for (const Sortie& t : s.sorties) {
        out << "<polyline class=\"sortie\" fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"6,4\" points=\""
            << at(t.launch) << ' ' << at(t.customer) << "\"/>\n";
        out << "<polyline class=\"sortie\" fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"6,4\" points=\""
            << at(t.customer) << ' ' << at(t.rendezvous) << "\"/>\n";
    }

    const double d = 7;
    out << "<rect class=\"depot\" x=\"" << px(kMargin + (pts[0].x - x0) * kScale - d) << "\" y=\""
        << px(kMargin + (y1 - pts[0].y) * kScale - d) << "\" width=\"" << px(2 * d) << "\" height=\"" << px(2 * d)
        << "\" fill=\"black\"/>\n";
    for (int v = 1; v <= inst.customers(); ++v) {
        out << "<circle class=\"customer\" cx=\"" << sx(pts[v].x) << "\" cy=\"" << sy(pts[v].y)
            << "\" r=\"6\" fill=\"" << (inst.is_eligible(v) ? "white" : "#999") << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(kMargin + (pts[v].x - x0) * kScale + 8) << "\" y=\""
            << px(kMargin + (y1 - pts[v].y) * kScale - 8) << "\" font-size=\"12\">" << v << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace fstsp
