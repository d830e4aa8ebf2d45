#pragma once

#include <string>
#include <utility>
#include <vector>

// Minimal hand-rolled SVG charts. Deterministic output, no external assets;
// enough for the plots the commands emit, nothing more.
namespace qwalk::svg {

struct Axis {
    std::string label;
    bool log = false;
};

struct ChartSpec {
    std::string title;
    Axis x;
    Axis y;
    int width = 860;
    int height = 540;
};

struct Series {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<std::pair<double, double>> points;
    bool draw_line = true;
    bool draw_markers = false;
};

std::string line_chart(const ChartSpec& spec, const std::vector<Series>& series);

// Grouped bars: one group per label, bars side by side at each position.
struct BarGroup {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<double> values;
};

std::string bar_chart(const ChartSpec& spec, const std::vector<double>& positions,
                      const std::vector<BarGroup>& groups);

// Free-form scatter, each point styled on its own. shape is "circle" or
// "triangle"; highlight draws a heavier outline.
struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    std::string fill = "#1f77b4";
    std::string shape = "circle";
    bool highlight = false;
};

std::string scatter_chart(const ChartSpec& spec, const std::vector<ScatterPoint>& points);

// Blue-to-yellow colormap on [0, 1], clamped. Used for the fidelity scale.
std::string colormap(double t);

}  // namespace qwalk::svg
