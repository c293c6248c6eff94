#include "pulsefront/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pulsefront/errors.hpp"

namespace pulsefront {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

namespace {

struct Mapper {
    double x0, x1, y0, y1;
    double px0, px1, py0, py1;
    double mx(double x) const { return px0 + (x - x0) / (x1 - x0) * (px1 - px0); }
    double my(double y) const { return py0 + (y - y0) / (y1 - y0) * (py1 - py0); }
};

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : series) {
        for (double v : s.x) {
            x0 = std::min(x0, v);
            x1 = std::max(x1, v);
        }
        for (double v : s.y) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (!(x0 < x1)) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (!(y0 < y1)) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double padx = 0.05 * (x1 - x0);
    const double pady = 0.08 * (y1 - y0);
    x0 -= padx;
    x1 += padx;
    y0 -= pady;
    y1 += pady;

    const int W = 720, H = 480;
    Mapper m{x0, x1, y0, y1, 70.0, W - 20.0, H - 50.0, 20.0};

    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"14\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";

    // Axes box and ticks.
    out << "<rect x=\"70\" y=\"20\" width=\"" << (W - 90) << "\" height=\"" << (H - 70)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x0 + (x1 - x0) * i / 5;
        const double yv = y0 + (y1 - y0) * i / 5;
        out << "<line x1=\"" << m.mx(xv) << "\" y1=\"" << H - 50 << "\" x2=\"" << m.mx(xv)
            << "\" y2=\"" << H - 45 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << m.mx(xv) << "\" y=\"" << H - 32
            << "\" text-anchor=\"middle\" font-size=\"10\">" << tick_label(xv)
            << "</text>\n";
        out << "<line x1=\"65\" y1=\"" << m.my(yv) << "\" x2=\"70\" y2=\"" << m.my(yv)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"62\" y=\"" << m.my(yv) + 3
            << "\" text-anchor=\"end\" font-size=\"10\">" << tick_label(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
    out << "<text x=\"16\" y=\"" << H / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
        << H / 2 << ")\">" << ylabel << "</text>\n";

    int legend_y = 34;
    for (const auto& s : series) {
        if (!s.points_only && s.x.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << m.mx(s.x[i]) << "," << m.my(s.y[i]) << " ";
            out << "\"/>\n";
        }
        if (s.points_only) {
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << "<circle cx=\"" << m.mx(s.x[i]) << "\" cy=\"" << m.my(s.y[i])
                    << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        }
        if (!s.label.empty()) {
            out << "<rect x=\"" << W - 190 << "\" y=\"" << legend_y - 8
                << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
            out << "<text x=\"" << W - 175 << "\" y=\"" << legend_y
                << "\" font-size=\"11\">" << s.label << "</text>\n";
            legend_y += 16;
        }
    }
    out << "</svg>\n";
}

} // namespace pulsefront
