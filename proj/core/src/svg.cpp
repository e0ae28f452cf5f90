#include "wanewave/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wanewave/errors.hpp"

namespace wanewave {

SvgPlot::SvgPlot(int width, int height, const std::string& x_label, const std::string& y_label)
    : width_(width), height_(height), x_label_(x_label), y_label_(y_label) {}

void SvgPlot::add_polyline(const std::vector<std::pair<double, double>>& pts,
                           const std::string& color, double stroke) {
    series_.push_back(Series{pts, color, stroke, false});
}

void SvgPlot::add_points(const std::vector<std::pair<double, double>>& pts,
                         const std::string& color, double radius) {
    series_.push_back(Series{pts, color, radius, true});
}

void SvgPlot::bounds(double& x0, double& x1, double& y0, double& y1) const {
    x0 = y0 = 1e300;
    x1 = y1 = -1e300;
    for (const Series& s : series_)
        for (const auto& [x, y] : s.pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (x0 > x1) { x0 = 0; x1 = 1; }
    if (y0 > y1) { y0 = 0; y1 = 1; }
    if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
    if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
}

std::string SvgPlot::render() const {
    const double ml = 60, mr = 15, mt = 15, mb = 45;
    const double pw = width_ - ml - mr, ph = height_ - mt - mb;
    double x0, x1, y0, y1;
    bounds(x0, x1, y0, y1);
    auto px = [&](double x) { return ml + pw * (x - x0) / (x1 - x0); };
    auto py = [&](double y) { return mt + ph * (1.0 - (y - y0) / (y1 - y0)); };

    std::ostringstream ss;
    ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
       << height_ << "\">\n";
    ss << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"white\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0;
        const double fy = y0 + (y1 - y0) * k / 4.0;
        ss << "<text x=\"" << px(fx) << "\" y=\"" << height_ - mb + 18
           << "\" font-size=\"11\" text-anchor=\"middle\">" << fx << "</text>\n";
        ss << "<text x=\"" << ml - 6 << "\" y=\"" << py(fy) + 4
           << "\" font-size=\"11\" text-anchor=\"end\">" << fy << "</text>\n";
    }
    ss << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height_ - 8
       << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label_ << "</text>\n";
    ss << "<text x=\"14\" y=\"" << mt + ph / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
       << "transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">" << y_label_ << "</text>\n";

    for (const Series& s : series_) {
        if (s.points) {
            for (const auto& [x, y] : s.pts)
                ss << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << s.stroke
                   << "\" fill=\"" << s.color << "\"/>\n";
        } else {
            ss << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\""
               << s.stroke << "\" points=\"";
            for (const auto& [x, y] : s.pts) ss << px(x) << "," << py(y) << " ";
            ss << "\"/>\n";
        }
    }
    ss << "</svg>\n";
    return ss.str();
}

void SvgPlot::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        throw DomainError("cannot open SVG output: " + path);
    out << render();
}

} // namespace wanewave
