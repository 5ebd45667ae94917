#pragma once

#include <string>
#include <vector>

namespace perpsim {

struct ChartSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct ChartPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Minimal self-contained SVG line chart.
struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    std::vector<ChartPoint> markers;  // drawn as red dots
    double width = 800;
    double height = 450;

    std::string render() const;
};

}  // namespace perpsim
