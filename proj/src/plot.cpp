#include "conflev/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "conflev/format.hpp"
#include "conflev/inference.hpp"

namespace conflev {

namespace {

double density(const ConfidenceDistribution& cd, double x) {
    return dist_pdf(cd.family, (x - cd.center) / cd.scale) / cd.scale;
}

bool in_region(const Hypothesis& h, double x) {
    switch (h.form) {
        case Hypothesis::Form::GreaterThan: return x > h.lo;
        case Hypothesis::Form::LessThan: return x < h.lo;
        case Hypothesis::Form::Between: return x > h.lo && x < h.hi;
    }
    return false;
}

// Hypothesis region clipped to the plotted domain; empty when they miss.
struct Clip {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = true;
};

Clip clip_region(const Hypothesis& h, double xmin, double xmax) {
    double lo = xmin, hi = xmax;
    switch (h.form) {
        case Hypothesis::Form::GreaterThan: lo = h.lo; break;
        case Hypothesis::Form::LessThan: hi = h.lo; break;
        case Hypothesis::Form::Between:
            lo = h.lo;
            hi = h.hi;
            break;
    }
    lo = std::max(lo, xmin);
    hi = std::min(hi, xmax);
    return {lo, hi, !(lo < hi)};
}

std::string xml_escape(const std::string& s) {
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

std::string num2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string num3g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string render_svg(const ConfidenceDistribution& cd, const Hypothesis& shaded,
                       const std::string& label) {
    const double xmin = cd.center - 4.0 * cd.scale;
    const double xmax = cd.center + 4.0 * cd.scale;
    const double peak = density(cd, cd.center) * 1.05;

    // 640x360 canvas; the curve lives inside fixed margins.
    const double left = 50.0, right = 620.0, top = 40.0, bottom = 320.0;
    const auto px = [&](double x) {
        return left + (x - xmin) / (xmax - xmin) * (right - left);
    };
    const auto py = [&](double d) { return bottom - d / peak * (bottom - top); };

    std::string svg;
    svg += "<?xml version=\"1.1\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
           "height=\"360\" viewBox=\"0 0 640 360\">\n";
    svg += "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"360\" fill=\"#ffffff\"/>\n";

    const Clip region = clip_region(shaded, xmin, xmax);
    if (!region.empty) {
        const int m = 128;
        std::string pts = num2(px(region.lo)) + "," + num2(bottom);
        for (int i = 0; i <= m; ++i) {
            const double x = region.lo + (region.hi - region.lo) * i / m;
            pts += " " + num2(px(x)) + "," + num2(py(density(cd, x)));
        }
        pts += " " + num2(px(region.hi)) + "," + num2(bottom);
        svg += "  <polygon points=\"" + pts + "\" fill=\"#7fb8d9\" fill-opacity=\"0.55\" "
               "stroke=\"none\"/>\n";
    }

    const int n = 256;
    std::string curve;
    for (int i = 0; i <= n; ++i) {
        const double x = xmin + (xmax - xmin) * i / n;
        if (i) curve += " ";
        curve += num2(px(x)) + "," + num2(py(density(cd, x)));
    }
    svg += "  <polyline points=\"" + curve + "\" fill=\"none\" stroke=\"#1a6f9e\" "
           "stroke-width=\"2\"/>\n";

    // Dashed markers at the hypothesis boundaries that fall inside the frame.
    std::vector<double> edges;
    if (shaded.form == Hypothesis::Form::Between) {
        edges = {shaded.lo, shaded.hi};
    } else {
        edges = {shaded.lo};
    }
    for (double e : edges) {
        if (e <= xmin || e >= xmax) continue;
        svg += "  <line x1=\"" + num2(px(e)) + "\" y1=\"" + num2(top) + "\" x2=\"" +
               num2(px(e)) + "\" y2=\"" + num2(bottom) + "\" stroke=\"#666666\" "
               "stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n";
    }

    // Baseline and ticks every two scale units.
    svg += "  <line x1=\"" + num2(left) + "\" y1=\"" + num2(bottom) + "\" x2=\"" + num2(right) +
           "\" y2=\"" + num2(bottom) + "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    for (int k = -4; k <= 4; k += 2) {
        const double x = cd.center + k * cd.scale;
        svg += "  <line x1=\"" + num2(px(x)) + "\" y1=\"" + num2(bottom) + "\" x2=\"" +
               num2(px(x)) + "\" y2=\"" + num2(bottom + 5.0) + "\" stroke=\"#444444\" "
               "stroke-width=\"1\"/>\n";
        svg += "  <text x=\"" + num2(px(x)) + "\" y=\"338\" font-family=\"sans-serif\" "
               "font-size=\"11\" fill=\"#222222\" text-anchor=\"middle\">" +
               xml_escape(num3g(x)) + "</text>\n";
    }

    const double label_x = region.empty ? px(cd.center) : px((region.lo + region.hi) / 2.0);
    svg += "  <text x=\"" + num2(label_x) + "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"20\" fill=\"#222222\" text-anchor=\"middle\">" + xml_escape(label) +
           "</text>\n";
    svg += "  <text x=\"" + num2(label_x) + "\" y=\"38\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"#555555\" text-anchor=\"middle\">confidence (" +
           xml_escape(shaded.text()) + ")</text>\n";
    svg += "</svg>\n";
    return svg;
}

std::string render_ascii(const ConfidenceDistribution& cd, const Hypothesis& shaded,
                         const std::string& label) {
    const int width = 70, height = 16;
    const double xmin = cd.center - 4.0 * cd.scale;
    const double xmax = cd.center + 4.0 * cd.scale;
    const double peak = density(cd, cd.center);

    std::vector<int> level(width);
    std::vector<bool> shade(width);
    for (int c = 0; c < width; ++c) {
        const double x = xmin + (xmax - xmin) * (c + 0.5) / width;
        level[c] = static_cast<int>(std::lround(density(cd, x) / peak * height));
        level[c] = std::clamp(level[c], 0, height);
        shade[c] = in_region(shaded, x);
    }

    std::string out = "confidence (" + shaded.text() + ") = " + label + "\n";
    for (int row = height; row >= 1; --row) {
        std::string line(width, ' ');
        for (int c = 0; c < width; ++c) {
            if (shade[c] && level[c] >= row) line[c] = '#';        // filled region
            else if (!shade[c] && level[c] == row) line[c] = '*';  // bare outline
        }
        // Trim trailing blanks so narrow curves stay tidy.
        const auto end = line.find_last_not_of(' ');
        out += (end == std::string::npos ? "" : line.substr(0, end + 1)) + "\n";
    }

    std::string axis(width, '-');
    const auto col_of = [&](double x) {
        return static_cast<int>(std::floor((x - xmin) / (xmax - xmin) * width));
    };
    std::vector<double> edges = shaded.form == Hypothesis::Form::Between
                                    ? std::vector<double>{shaded.lo, shaded.hi}
                                    : std::vector<double>{shaded.lo};
    for (double e : edges) {
        const int c = col_of(e);
        if (c >= 0 && c < width) axis[c] = '+';
    }
    out += axis + "\n";

    std::string labels(width, ' ');
    const auto paste = [&](const std::string& s, int start) {
        start = std::clamp(start, 0, width - static_cast<int>(s.size()));
        for (size_t i = 0; i < s.size(); ++i) labels[start + i] = s[i];
    };
    paste(num3g(xmin), 0);
    paste(num3g(xmax), width - static_cast<int>(num3g(xmax).size()));
    const std::string mid = num3g(cd.center);
    paste(mid, width / 2 - static_cast<int>(mid.size()) / 2);
    out += labels + "\n";
    return out;
}

}  // namespace

std::string render_confidence_plot(const ConfidenceDistribution& cd, const Hypothesis& shaded,
                                   PlotFormat format) {
    const std::string label = format_percent(confidence_level(cd, shaded).confidence);
    switch (format) {
        case PlotFormat::SVG: return render_svg(cd, shaded, label);
        case PlotFormat::ASCII: return render_ascii(cd, shaded, label);
    }
    throw std::logic_error("render_confidence_plot: unknown format");
}

}  // namespace conflev
