// Minimal TOML subset for scenario files: [section] headers, scalar keys
// (bool, integer, real, string) and flat homogeneous arrays. No nesting,
// no dates, no multi-line strings. Order-preserving so a parsed file can be
// re-serialized and compared structurally.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wfqh/numerics.hpp"

namespace wfqh {

struct TomlValue {
    enum class Kind { boolean, integer, real, text, real_array, text_array };
    Kind kind = Kind::real;
    bool b = false;
    std::int64_t i = 0;
    double d = 0.0;
    std::string s;
    Vec nums;
    std::vector<std::string> texts;

    // accessors throw config_error on kind mismatch; integers widen to real
    double as_real() const;
    std::int64_t as_int() const;
    bool as_bool() const;
    const std::string& as_text() const;
    const Vec& as_reals() const;
    const std::vector<std::string>& as_texts() const;

    static TomlValue real(double v);
    static TomlValue integer(std::int64_t v);
    static TomlValue boolean(bool v);
    static TomlValue text(std::string v);
    static TomlValue reals(Vec v);
};

struct TomlSection {
    std::string name;
    std::vector<std::pair<std::string, TomlValue>> entries;

    const TomlValue* find(const std::string& key) const;
    void set(const std::string& key, TomlValue v);
};

struct TomlDoc {
    std::vector<TomlSection> sections;

    TomlSection& section(const std::string& name);  // creates on first use
    const TomlSection* find(const std::string& name) const;
};

bool toml_equal(const TomlDoc& a, const TomlDoc& b);  // structural, reals bitwise

TomlDoc parse_toml(const std::string& text);
std::string write_toml(const TomlDoc& doc);  // canonical formatting, 17 digit reals
TomlDoc load_toml_file(const std::string& path);

// lossless decimal form, 17 significant digits
std::string fmt17(double v);

}  // namespace wfqh
