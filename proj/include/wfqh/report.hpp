// Result serialization: CSV tables with lossless floats, pass/fail check
// lines, and self-contained SVG log-log decay plots. Everything here is
// deterministic so repeated runs compare byte for byte.
#pragma once

#include <string>
#include <vector>

#include "wfqh/numerics.hpp"

namespace wfqh {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);  // throws on width mismatch
    std::string to_string() const;
};

std::string csv_cell(double v);

struct CheckLine {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

bool all_pass(const std::vector<CheckLine>& checks);
CsvTable checks_table(const std::vector<CheckLine>& checks);
std::string format_check(const CheckLine& c);  // [PASS] name (value=..., thr=...)

// Log-log decay figure; series with fit=true carry a slope annotation.
struct SeriesPlot {
    struct Series {
        std::string label;
        Vec x, y;
        bool fit = false;
        double slope = 0.0;
    };
    std::string title, x_label, y_label;
    std::vector<Series> series;
};

std::string render_svg_loglog(const SeriesPlot& plot);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace wfqh
