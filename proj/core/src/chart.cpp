#include <algorithm>
#include <cstdio>
#include <sstream>

#include "psp/report.hpp"

namespace psp {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

// Bar chart of SAI scores, scenarios on the x-axis in index order (the SAI is
// already sorted by score descending).
std::string sai_chart_svg(const std::vector<SaiEntry>& sai) {
    constexpr double width = 640.0;
    constexpr double height = 360.0;
    constexpr double margin_left = 50.0;
    constexpr double margin_bottom = 70.0;
    constexpr double margin_top = 40.0;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
    out << "  <text x=\"" << num(width / 2)
        << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
           "Social Attraction Index</text>\n";

    if (sai.empty()) {
        out << "  <text x=\"" << num(width / 2) << "\" y=\"" << num(height / 2)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
               "fill=\"#666666\">no matched posts</text>\n";
        out << "</svg>\n";
        return out.str();
    }

    const double plot_width = width - margin_left - 20.0;
    const double plot_height = height - margin_top - margin_bottom;
    const double max_score =
        std::max(1e-12, std::max_element(sai.begin(), sai.end(), [](const auto& a, const auto& b) {
                            return a.raw_score < b.raw_score;
                        })->raw_score);

    const double slot = plot_width / static_cast<double>(sai.size());
    const double bar_width = slot * 0.7;

    // axes
    out << "  <line x1=\"" << num(margin_left) << "\" y1=\"" << num(margin_top) << "\" x2=\""
        << num(margin_left) << "\" y2=\"" << num(margin_top + plot_height)
        << "\" stroke=\"#333333\"/>\n";
    out << "  <line x1=\"" << num(margin_left) << "\" y1=\"" << num(margin_top + plot_height)
        << "\" x2=\"" << num(margin_left + plot_width) << "\" y2=\""
        << num(margin_top + plot_height) << "\" stroke=\"#333333\"/>\n";

    for (std::size_t i = 0; i < sai.size(); ++i) {
        const auto& e = sai[i];
        const double h = e.raw_score <= 0.0 ? 0.0 : plot_height * (e.raw_score / max_score);
        const double x = margin_left + slot * static_cast<double>(i) + (slot - bar_width) / 2.0;
        const double y = margin_top + plot_height - h;
        const double center = x + bar_width / 2.0;
        const char* fill = e.attacker_class == AttackerClass::Insider ? "#4472a8" : "#b0b0b0";

        out << "  <rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(bar_width)
            << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\"/>\n";
        char score[40];
        std::snprintf(score, sizeof score, "%.3f", e.raw_score);
        out << "  <text x=\"" << num(center) << "\" y=\"" << num(y - 5.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << score
            << "</text>\n";
        out << "  <text x=\"" << num(center) << "\" y=\"" << num(margin_top + plot_height + 14.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\" "
               "transform=\"rotate(25 "
            << num(center) << " " << num(margin_top + plot_height + 14.0) << ")\">"
            << xml_escape(e.scenario) << "</text>\n";
    }

    out << "  <text x=\"" << num(margin_left) << "\" y=\"" << num(height - 8.0)
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#666666\">"
           "bars: raw engagement score; blue = insider, grey = outsider</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace psp
