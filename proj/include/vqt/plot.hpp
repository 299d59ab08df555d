#pragma once

// Small SVG plotter: line/marker series on linear or log-x axes, and a
// signed heatmap for matrices.

#include "vqt/qcore.hpp"

#include <string>
#include <vector>

namespace vqt::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    bool markers = false;
    bool line = true;
    std::string colour;  // empty: palette by index
};

struct Figure {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    int width = 720;
    int height = 480;
    std::vector<Series> series;
};

/// Default series colour for index i.
std::string palette(std::size_t i);

std::string render(const Figure& fig);

/// Real part of `m`, one cell per entry, diverging colour scale symmetric
/// about zero, value printed in each cell.
std::string heatmap(const qcore::Matrix& m, const std::string& title, const std::vector<std::string>& labels);

}  // namespace vqt::plot
