#include "vqt/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace vqt::plot {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// 1-2-5 ticks covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
}

}  // namespace

std::string palette(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string render(const Figure& fig) {
    const double ml = 80, mr = 170, mt = 40, mb = 60;
    const double pw = fig.width - ml - mr;
    const double ph = fig.height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : fig.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (fig.log_x && !(s.x[i] > 0.0))) {
                continue;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = fig.log_x ? 1.0 : 0.0;
        xmax = fig.log_x ? 10.0 : 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin) {
        xmax = fig.log_x ? xmin * 10.0 : xmin + 1.0;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto tx = [&](double x) {
        const double u = fig.log_x ? (std::log10(x) - std::log10(xmin)) / (std::log10(xmax) - std::log10(xmin))
                                   : (x - xmin) / (xmax - xmin);
        return ml + u * pw;
    };
    auto ty = [&](double y) { return mt + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fig.width << "\" height=\"" << fig.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(fig.title) << "</text>\n";

    // Axes and ticks.
    o << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    std::vector<double> xt;
    if (fig.log_x) {
        for (int e = static_cast<int>(std::ceil(std::log10(xmin) - 1e-9));
             e <= static_cast<int>(std::floor(std::log10(xmax) + 1e-9)); ++e) {
            xt.push_back(std::pow(10.0, e));
        }
    } else {
        xt = linear_ticks(xmin, xmax);
    }
    for (double x : xt) {
        const double px = tx(x);
        o << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(px) << "\" y2=\""
          << fmt(mt + ph + 5) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(mt + ph + 19) << "\" text-anchor=\"middle\">" << fmt(x, "%g")
          << "</text>\n";
    }
    for (double y : linear_ticks(ymin, ymax)) {
        const double py = ty(y);
        o << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(ml) << "\" y2=\"" << fmt(py)
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(py + 4) << "\" text-anchor=\"end\">" << fmt(y, "%g")
          << "</text>\n";
    }
    o << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(fig.height - 15.0) << "\" text-anchor=\"middle\">"
      << escape(fig.x_label) << "</text>\n";
    o << "<text transform=\"translate(20," << fmt(mt + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(fig.y_label) << "</text>\n";

    // Series, clipped to the plot area.
    o << "<clipPath id=\"plot\"><rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";
    for (std::size_t k = 0; k < fig.series.size(); ++k) {
        const auto& s = fig.series[k];
        const std::string colour = s.colour.empty() ? kPalette[k % std::size(kPalette)] : s.colour;
        std::string path;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (fig.log_x && !(s.x[i] > 0.0))) {
                continue;
            }
            path += (path.empty() ? "M" : " L") + fmt(tx(s.x[i])) + " " + fmt(ty(s.y[i]));
            if (s.markers) {
                o << "<circle cx=\"" << fmt(tx(s.x[i])) << "\" cy=\"" << fmt(ty(s.y[i])) << "\" r=\"3\" fill=\"none\" stroke=\""
                  << colour << "\"/>\n";
            }
        }
        if (s.line && !path.empty()) {
            o << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\""
              << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        }
    }
    o << "</g>\n";

    // Legend.
    for (std::size_t k = 0; k < fig.series.size(); ++k) {
        const auto& s = fig.series[k];
        const std::string colour = s.colour.empty() ? kPalette[k % std::size(kPalette)] : s.colour;
        const double ly = mt + 12 + 18.0 * static_cast<double>(k);
        const double lx = ml + pw + 12;
        o << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 24) << "\" y2=\"" << fmt(ly)
          << "\" stroke=\"" << colour << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
          << "/>\n";
        o << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string heatmap(const qcore::Matrix& m, const std::string& title, const std::vector<std::string>& labels) {
    const std::size_t n = m.dim();
    const double cell = 70, ml = 60, mt = 50;
    const double size = cell * static_cast<double>(n);
    double vmax = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            vmax = std::max(vmax, std::abs(m(r, c).real()));
        }
    }
    if (vmax == 0.0) {
        vmax = 1.0;
    }

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(ml + size + 20) << "\" height=\""
      << fmt(mt + size + 20) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << fmt(ml + size / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double v = m(r, c).real() / vmax;  // [-1, 1]
            // White at zero, red for positive, blue for negative.
            const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(v))));
            char colour[8];
            if (v >= 0) {
                std::snprintf(colour, sizeof colour, "#ff%02x%02x", fade, fade);
            } else {
                std::snprintf(colour, sizeof colour, "#%02x%02xff", fade, fade);
            }
            const double x = ml + cell * static_cast<double>(c);
            const double y = mt + cell * static_cast<double>(r);
            o << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(cell) << "\" height=\""
              << fmt(cell) << "\" fill=\"" << colour << "\" stroke=\"#888\"/>\n";
            o << "<text x=\"" << fmt(x + cell / 2) << "\" y=\"" << fmt(y + cell / 2 + 4) << "\" text-anchor=\"middle\">"
              << fmt(m(r, c).real(), "%.3f") << "</text>\n";
        }
        if (r < labels.size()) {
            const double y = mt + cell * (static_cast<double>(r) + 0.5) + 4;
            o << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(y) << "\" text-anchor=\"end\">" << escape(labels[r])
              << "</text>\n";
            o << "<text x=\"" << fmt(ml + cell * (static_cast<double>(r) + 0.5)) << "\" y=\"" << fmt(mt - 8)
              << "\" text-anchor=\"middle\">" << escape(labels[r]) << "</text>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace vqt::plot
