#include "qwalk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qwalk::svg {

namespace {

constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 48;
constexpr int kMarginBottom = 56;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_text(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
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

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range pad(Range r, bool log_scale) {
    if (log_scale) {
        r.lo = std::log10(r.lo);
        r.hi = std::log10(r.hi);
    }
    if (r.hi <= r.lo) {
        r.lo -= 0.5;
        r.hi += 0.5;
    }
    const double slack = 0.05 * (r.hi - r.lo);
    return {r.lo - slack, r.hi + slack};
}

// Tick positions at a 1/2/5 progression covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> ticks;
    double t = std::ceil(lo / step) * step;
    for (; t <= hi + 1e-12 * span; t += step) ticks.push_back(t == 0.0 ? 0.0 : t);
    return ticks;
}

class Frame {
public:
    Frame(const ChartSpec& spec, Range x_data, Range y_data)
        : spec_(spec),
          x_(pad(x_data, spec.x.log)),
          y_(pad(y_data, spec.y.log)),
          plot_w_(spec.width - kMarginLeft - kMarginRight),
          plot_h_(spec.height - kMarginTop - kMarginBottom) {}

    double px(double x) const {
        const double v = spec_.x.log ? std::log10(x) : x;
        return kMarginLeft + (v - x_.lo) / (x_.hi - x_.lo) * plot_w_;
    }
    double py(double y) const {
        const double v = spec_.y.log ? std::log10(y) : y;
        return kMarginTop + plot_h_ - (v - y_.lo) / (y_.hi - y_.lo) * plot_h_;
    }

    std::string header() const {
        std::string out;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec_.width) +
               "\" height=\"" + std::to_string(spec_.height) + "\" viewBox=\"0 0 " +
               std::to_string(spec_.width) + " " + std::to_string(spec_.height) + "\">\n";
        out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out += "<text x=\"" + num(spec_.width / 2.0) +
               "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
               escape(spec_.title) + "</text>\n";
        return out;
    }

    std::string axes() const {
        std::string out;
        const double x0 = kMarginLeft, x1 = kMarginLeft + plot_w_;
        const double y0 = kMarginTop, y1 = kMarginTop + plot_h_;
        out += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(plot_w_) +
               "\" height=\"" + num(plot_h_) + "\" fill=\"none\" stroke=\"#333\"/>\n";

        for (double t : ticks(x_, spec_.x.log)) {
            const double x = px(spec_.x.log ? std::pow(10.0, t) : t);
            if (x < x0 - 0.5 || x > x1 + 0.5) continue;
            out += "<line x1=\"" + num(x) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x) + "\" y2=\"" +
                   num(y1 + 5) + "\" stroke=\"#333\"/>\n";
            out += "<text x=\"" + num(x) + "\" y=\"" + num(y1 + 20) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
                   tick_label(t, spec_.x.log) + "</text>\n";
        }
        for (double t : ticks(y_, spec_.y.log)) {
            const double y = py(spec_.y.log ? std::pow(10.0, t) : t);
            if (y < y0 - 0.5 || y > y1 + 0.5) continue;
            out += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x0) +
                   "\" y2=\"" + num(y) + "\" stroke=\"#333\"/>\n";
            out += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(y + 4) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
                   tick_label(t, spec_.y.log) + "</text>\n";
        }
        out += "<text x=\"" + num(x0 + plot_w_ / 2.0) + "\" y=\"" + num(y1 + 42) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
               escape(spec_.x.label) + "</text>\n";
        out += "<text x=\"18\" y=\"" + num(y0 + plot_h_ / 2.0) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
               num(y0 + plot_h_ / 2.0) + ")\">" + escape(spec_.y.label) + "</text>\n";
        return out;
    }

private:
    static std::vector<double> ticks(Range r, bool log_scale) {
        if (!log_scale) return linear_ticks(r.lo, r.hi);
        std::vector<double> out;
        for (double t = std::ceil(r.lo); t <= std::floor(r.hi) + 1e-12; t += 1.0) out.push_back(t);
        if (out.size() < 2) return linear_ticks(r.lo, r.hi);
        return out;
    }

    static std::string tick_label(double t, bool log_scale) {
        return tick_text(log_scale ? std::pow(10.0, t) : t);
    }

    ChartSpec spec_;
    Range x_, y_;
    double plot_w_, plot_h_;
};

Range span_of(const std::vector<double>& values, bool log_scale, const char* axis) {
    Range r{values.front(), values.front()};
    for (double v : values) {
        if (log_scale && !(v > 0.0))
            throw std::invalid_argument(std::string("svg: log ") + axis + " axis needs positive values");
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
    }
    return r;
}

std::string legend(const ChartSpec& spec,
                   const std::vector<std::pair<std::string, std::string>>& items) {
    std::string out;
    double y = kMarginTop + 14.0;
    const double x = spec.width - kMarginRight - 150.0;
    for (const auto& [label, color] : items) {
        if (label.empty()) continue;
        out += "<rect x=\"" + num(x) + "\" y=\"" + num(y - 9) +
               "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
        out += "<text x=\"" + num(x + 18) + "\" y=\"" + num(y + 2) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(label) + "</text>\n";
        y += 18.0;
    }
    return out;
}

}  // namespace

std::string line_chart(const ChartSpec& spec, const std::vector<Series>& series) {
    std::vector<double> xs, ys;
    for (const Series& s : series)
        for (const auto& [x, y] : s.points) {
            xs.push_back(x);
            ys.push_back(y);
        }
    if (xs.empty()) throw std::invalid_argument("svg: line chart with no points");

    const Frame frame(spec, span_of(xs, spec.x.log, "x"), span_of(ys, spec.y.log, "y"));
    std::string out = frame.header() + frame.axes();
    std::vector<std::pair<std::string, std::string>> legend_items;
    for (const Series& s : series) {
        legend_items.emplace_back(s.label, s.color);
        if (s.draw_line && s.points.size() > 1) {
            out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : s.points) out += num(frame.px(x)) + "," + num(frame.py(y)) + " ";
            out += "\"/>\n";
        }
        if (s.draw_markers || s.points.size() == 1) {
            for (const auto& [x, y] : s.points)
                out += "<circle cx=\"" + num(frame.px(x)) + "\" cy=\"" + num(frame.py(y)) +
                       "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
        }
    }
    out += legend(spec, legend_items);
    out += "</svg>\n";
    return out;
}

std::string bar_chart(const ChartSpec& spec, const std::vector<double>& positions,
                      const std::vector<BarGroup>& groups) {
    if (positions.empty() || groups.empty()) throw std::invalid_argument("svg: empty bar chart");
    for (const BarGroup& g : groups)
        if (g.values.size() != positions.size())
            throw std::invalid_argument("svg: bar group size does not match positions");
    if (spec.x.log || spec.y.log) throw std::invalid_argument("svg: bar charts are linear only");

    double top = 0.0;
    for (const BarGroup& g : groups)
        for (double v : g.values) {
            if (v < 0.0) throw std::invalid_argument("svg: negative bar value");
            top = std::max(top, v);
        }
    if (top == 0.0) top = 1.0;

    double spacing = positions.size() > 1 ? positions[1] - positions[0] : 1.0;
    for (std::size_t i = 1; i < positions.size(); ++i)
        spacing = std::min(spacing, positions[i] - positions[i - 1]);
    if (!(spacing > 0.0)) throw std::invalid_argument("svg: bar positions must increase");

    const Range x_data{positions.front() - spacing, positions.back() + spacing};
    const Frame frame(spec, x_data, Range{0.0, top});
    std::string out = frame.header() + frame.axes();

    const double slot = frame.px(positions.front() + spacing) - frame.px(positions.front());
    const double bar_w = 0.8 * slot / static_cast<double>(groups.size());
    const double base_y = frame.py(0.0);
    std::vector<std::pair<std::string, std::string>> legend_items;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const BarGroup& g = groups[gi];
        legend_items.emplace_back(g.label, g.color);
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (g.values[i] == 0.0) continue;
            const double cx = frame.px(positions[i]) - 0.4 * slot + bar_w * static_cast<double>(gi);
            const double y = frame.py(g.values[i]);
            out += "<rect x=\"" + num(cx) + "\" y=\"" + num(y) + "\" width=\"" + num(bar_w) +
                   "\" height=\"" + num(base_y - y) + "\" fill=\"" + g.color + "\"/>\n";
        }
    }
    out += legend(spec, legend_items);
    out += "</svg>\n";
    return out;
}

std::string scatter_chart(const ChartSpec& spec, const std::vector<ScatterPoint>& points) {
    if (points.empty()) throw std::invalid_argument("svg: empty scatter chart");
    std::vector<double> xs, ys;
    for (const ScatterPoint& p : points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    const Frame frame(spec, span_of(xs, spec.x.log, "x"), span_of(ys, spec.y.log, "y"));
    std::string out = frame.header() + frame.axes();
    for (const ScatterPoint& p : points) {
        const double x = frame.px(p.x);
        const double y = frame.py(p.y);
        const std::string stroke = p.highlight ? "stroke=\"#c0392b\" stroke-width=\"2\"" : "stroke=\"black\"";
        if (p.shape == "triangle") {
            out += "<polygon points=\"" + num(x) + "," + num(y - 6) + " " + num(x - 5.5) + "," +
                   num(y + 4.5) + " " + num(x + 5.5) + "," + num(y + 4.5) + "\" fill=\"" + p.fill +
                   "\" " + stroke + "/>\n";
        } else {
            out += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"5\" fill=\"" + p.fill +
                   "\" " + stroke + "/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

std::string colormap(double t) {
    t = std::clamp(t, 0.0, 1.0);
    // Three-stop gradient: deep blue, teal, yellow.
    const double stops[3][3] = {{38, 70, 160}, {32, 160, 152}, {250, 220, 60}};
    const double pos = t * 2.0;
    const int lo = pos >= 2.0 ? 1 : static_cast<int>(pos);
    const double frac = pos - lo;
    char buf[8];
    std::string out = "#";
    for (int c = 0; c < 3; ++c) {
        const int v = static_cast<int>(std::lround(stops[lo][c] * (1.0 - frac) + stops[lo + 1][c] * frac));
        std::snprintf(buf, sizeof(buf), "%02x", v);
        out += buf;
    }
    return out;
}

}  // namespace qwalk::svg
