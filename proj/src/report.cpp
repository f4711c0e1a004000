#include "wfqh/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wfqh/toml_lite.hpp"

namespace wfqh {

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header.size())
        throw config_error(str_printf("csv: row has %zu cells, header has %zu", cells.size(),
                                      header.size()));
    rows.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
    return os.str();
}

std::string csv_cell(double v) { return fmt17(v); }

bool all_pass(const std::vector<CheckLine>& checks) {
    for (const CheckLine& c : checks)
        if (!c.pass) return false;
    return true;
}

CsvTable checks_table(const std::vector<CheckLine>& checks) {
    CsvTable t;
    t.header = {"check", "value", "threshold", "pass", "note"};
    for (const CheckLine& c : checks)
        t.add_row({c.name, csv_cell(c.value), csv_cell(c.threshold), c.pass ? "1" : "0", c.note});
    return t;
}

std::string format_check(const CheckLine& c) {
    std::string line = std::string(c.pass ? "[PASS] " : "[FAIL] ") + c.name +
                       str_printf(" (value=%.6g, thr=%.6g", c.value, c.threshold);
    if (!c.note.empty()) line += ", " + c.note;
    return line + ")";
}

namespace {

// fixed two-decimal pixel coordinates keep the output stable across platforms
std::string px(double v) { return str_printf("%.2f", v); }

const char* kPalette[] = {"#1f6f8b", "#c0532b", "#5b8c5a", "#7b5aa6", "#a88b2a", "#3b3b3b"};

}  // namespace

std::string render_svg_loglog(const SeriesPlot& plot) {
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    bool first = true;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            double lx = std::log10(s.x[i]), ly = std::log10(s.y[i]);
            if (first) {
                lo_x = hi_x = lx;
                lo_y = hi_y = ly;
                first = false;
            }
            lo_x = std::min(lo_x, lx);
            hi_x = std::max(hi_x, lx);
            lo_y = std::min(lo_y, ly);
            hi_y = std::max(hi_y, ly);
        }
    if (first) {
        lo_x = lo_y = -1;
        hi_x = hi_y = 1;
    }
    if (hi_x - lo_x < 1e-12) hi_x = lo_x + 1;
    if (hi_y - lo_y < 1e-12) hi_y = lo_y + 1;
    auto X = [&](double lx) { return ml + (lx - lo_x) / (hi_x - lo_x) * (W - ml - mr); };
    auto Y = [&](double ly) { return H - mb - (ly - lo_y) / (hi_y - lo_y) * (H - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << px(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << plot.title << "</text>\n";

    // decade grid
    for (int d = static_cast<int>(std::ceil(lo_x)); d <= std::floor(hi_x); ++d) {
        os << "<line x1=\"" << px(X(d)) << "\" y1=\"" << px(mt) << "\" x2=\"" << px(X(d))
           << "\" y2=\"" << px(H - mb) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << px(X(d)) << "\" y=\"" << px(H - mb + 16)
           << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(lo_y)); d <= std::floor(hi_y); ++d) {
        os << "<line x1=\"" << px(ml) << "\" y1=\"" << px(Y(d)) << "\" x2=\"" << px(W - mr)
           << "\" y2=\"" << px(Y(d)) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << px(ml - 6) << "\" y=\"" << px(Y(d) + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
    }
    os << "<rect x=\"" << px(ml) << "\" y=\"" << px(mt) << "\" width=\"" << px(W - ml - mr)
       << "\" height=\"" << px(H - mt - mb) << "\" fill=\"none\" stroke=\"#444444\"/>\n";
    os << "<text x=\"" << px(W / 2) << "\" y=\"" << px(H - 12)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << plot.x_label << "</text>\n";
    os << "<text x=\"18\" y=\"" << px(H / 2)
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 " << px(H / 2)
       << ")\">" << plot.y_label << "</text>\n";

    int ci = 0;
    double legend_y = mt + 14;
    for (const auto& s : plot.series) {
        const char* color = kPalette[ci++ % 6];
        std::ostringstream pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            pts << px(X(std::log10(s.x[i]))) << ',' << px(Y(std::log10(s.y[i]))) << ' ';
        }
        os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            os << "<circle cx=\"" << px(X(std::log10(s.x[i]))) << "\" cy=\""
               << px(Y(std::log10(s.y[i]))) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        std::string label = s.label;
        if (s.fit) label += str_printf(", slope = %.3f", s.slope);
        os << "<text x=\"" << px(ml + 10) << "\" y=\"" << px(legend_y) << "\" font-size=\"12\" "
           << "fill=\"" << color << "\">" << label << "</text>\n";
        legend_y += 16;
    }
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("report: cannot write " + path);
    out << content;
    if (!out.good()) throw config_error("report: write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("report: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace wfqh
