#ifndef PULSEFRONT_REPORT_HPP
#define PULSEFRONT_REPORT_HPP

#include <string>
#include <vector>

namespace pulsefront {

/// Locale-independent numeric formatting for the CSV outputs; identical
/// inputs must produce byte-identical files.
std::string fmt_num(double v);

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    std::string label;
    bool points_only = false;
};

/// Minimal line/scatter plot writer. CSV is the canonical output; the SVG is
/// a courtesy rendering with fixed axes and no external dependencies.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series);

void ensure_dir(const std::string& path);

} // namespace pulsefront

#endif
