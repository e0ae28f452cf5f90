#pragma once

#include <string>
#include <vector>

namespace wanewave {

/// Minimal polyline plotter for phase planes and diagram envelopes.
class SvgPlot {
public:
    SvgPlot(int width, int height, const std::string& x_label, const std::string& y_label);

    void add_polyline(const std::vector<std::pair<double, double>>& pts,
                      const std::string& color, double stroke = 1.0);
    void add_points(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                    double radius = 1.5);
    std::string render() const;
    void write(const std::string& path) const;

private:
    struct Series {
        std::vector<std::pair<double, double>> pts;
        std::string color;
        double stroke;
        bool points;
    };
    void bounds(double& x0, double& x1, double& y0, double& y1) const;

    int width_, height_;
    std::string x_label_, y_label_;
    std::vector<Series> series_;
};

} // namespace wanewave
