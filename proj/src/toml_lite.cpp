#include "wfqh/toml_lite.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wfqh {

namespace {

const char* kind_name(TomlValue::Kind k) {
    switch (k) {
        case TomlValue::Kind::boolean: return "boolean";
        case TomlValue::Kind::integer: return "integer";
        case TomlValue::Kind::real: return "real";
        case TomlValue::Kind::text: return "string";
        case TomlValue::Kind::real_array: return "real array";
        case TomlValue::Kind::text_array: return "string array";
    }
    return "?";
}

[[noreturn]] void kind_mismatch(TomlValue::Kind have, const char* want) {
    throw config_error(str_printf("toml: value is %s, wanted %s", kind_name(have), want));
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// strips an unquoted comment; quotes in this subset never contain '#'
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

TomlValue parse_scalar(const std::string& tok, int line) {
    if (tok == "true") return TomlValue::boolean(true);
    if (tok == "false") return TomlValue::boolean(false);
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        return TomlValue::text(tok.substr(1, tok.size() - 2));
    char* end = nullptr;
    if (tok.find_first_of(".eE") == std::string::npos ||
        tok.find("inf") != std::string::npos || tok.find("nan") != std::string::npos) {
        errno = 0;
        long long v = std::strtoll(tok.c_str(), &end, 10);
        if (end == tok.c_str() + tok.size() && errno == 0 &&
            tok.find_first_of("in") == std::string::npos)
            return TomlValue::integer(v);
    }
    errno = 0;
    double d = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty())
        throw config_error(str_printf("toml: line %d: bad value '%s'", line, tok.c_str()));
    (void)errno;
    return TomlValue::real(d);
}

std::vector<std::string> split_items(const std::string& body, int line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_str = false;
    for (char c : body) {
        if (c == '"') in_str = !in_str;
        if (c == ',' && !in_str) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    std::string last = trim(cur);
    if (!last.empty()) out.push_back(last);
    if (in_str) throw config_error(str_printf("toml: line %d: unterminated string", line));
    for (const std::string& s : out)
        if (s.empty()) throw config_error(str_printf("toml: line %d: empty array item", line));
    return out;
}

TomlValue parse_value(const std::string& tok, int line) {
    if (!tok.empty() && tok.front() == '[') {
        if (tok.back() != ']')
            throw config_error(str_printf("toml: line %d: unterminated array", line));
        std::vector<std::string> items = split_items(tok.substr(1, tok.size() - 2), line);
        bool text = !items.empty() && items.front().front() == '"';
        TomlValue v;
        v.kind = text ? TomlValue::Kind::text_array : TomlValue::Kind::real_array;
        for (const std::string& it : items) {
            TomlValue e = parse_scalar(it, line);
            if (text) {
                if (e.kind != TomlValue::Kind::text)
                    throw config_error(str_printf("toml: line %d: mixed array", line));
                v.texts.push_back(e.s);
            } else {
                if (e.kind != TomlValue::Kind::real && e.kind != TomlValue::Kind::integer)
                    throw config_error(str_printf("toml: line %d: mixed array", line));
                v.nums.push_back(e.kind == TomlValue::Kind::real
                                     ? e.d
                                     : static_cast<double>(e.i));
            }
        }
        return v;
    }
    return parse_scalar(tok, line);
}

// reals must reparse as reals, so integral values keep a trailing ".0"
std::string real_token(double v) {
    std::string s = fmt17(v);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void write_value(std::ostringstream& os, const TomlValue& v) {
    switch (v.kind) {
        case TomlValue::Kind::boolean: os << (v.b ? "true" : "false"); break;
        case TomlValue::Kind::integer: os << v.i; break;
        case TomlValue::Kind::real: os << real_token(v.d); break;
        case TomlValue::Kind::text: os << '"' << v.s << '"'; break;
        case TomlValue::Kind::real_array:
            os << '[';
            for (std::size_t i = 0; i < v.nums.size(); ++i)
                os << (i ? ", " : "") << real_token(v.nums[i]);
            os << ']';
            break;
        case TomlValue::Kind::text_array:
            os << '[';
            for (std::size_t i = 0; i < v.texts.size(); ++i)
                os << (i ? ", " : "") << '"' << v.texts[i] << '"';
            os << ']';
            break;
    }
}

}  // namespace

double TomlValue::as_real() const {
    if (kind == Kind::real) return d;
    if (kind == Kind::integer) return static_cast<double>(i);
    kind_mismatch(kind, "real");
}

std::int64_t TomlValue::as_int() const {
    if (kind != Kind::integer) kind_mismatch(kind, "integer");
    return i;
}

bool TomlValue::as_bool() const {
    if (kind != Kind::boolean) kind_mismatch(kind, "boolean");
    return b;
}

const std::string& TomlValue::as_text() const {
    if (kind != Kind::text) kind_mismatch(kind, "string");
    return s;
}

const Vec& TomlValue::as_reals() const {
    if (kind != Kind::real_array) kind_mismatch(kind, "real array");
    return nums;
}

const std::vector<std::string>& TomlValue::as_texts() const {
    if (kind != Kind::text_array) kind_mismatch(kind, "string array");
    return texts;
}

TomlValue TomlValue::real(double v) {
    TomlValue t;
    t.kind = Kind::real;
    t.d = v;
    return t;
}

TomlValue TomlValue::integer(std::int64_t v) {
    TomlValue t;
    t.kind = Kind::integer;
    t.i = v;
    return t;
}

TomlValue TomlValue::boolean(bool v) {
    TomlValue t;
    t.kind = Kind::boolean;
    t.b = v;
    return t;
}

TomlValue TomlValue::text(std::string v) {
    TomlValue t;
    t.kind = Kind::text;
    t.s = std::move(v);
    return t;
}

TomlValue TomlValue::reals(Vec v) {
    TomlValue t;
    t.kind = Kind::real_array;
    t.nums = std::move(v);
    return t;
}

const TomlValue* TomlSection::find(const std::string& key) const {
    for (const auto& e : entries)
        if (e.first == key) return &e.second;
    return nullptr;
}

void TomlSection::set(const std::string& key, TomlValue v) {
    for (auto& e : entries)
        if (e.first == key) {
            e.second = std::move(v);
            return;
        }
    entries.emplace_back(key, std::move(v));
}

TomlSection& TomlDoc::section(const std::string& name) {
    for (TomlSection& s : sections)
        if (s.name == name) return s;
    sections.push_back(TomlSection{name, {}});
    return sections.back();
}

const TomlSection* TomlDoc::find(const std::string& name) const {
    for (const TomlSection& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

bool toml_equal(const TomlDoc& a, const TomlDoc& b) {
    if (a.sections.size() != b.sections.size()) return false;
    for (std::size_t i = 0; i < a.sections.size(); ++i) {
        const TomlSection &x = a.sections[i], &y = b.sections[i];
        if (x.name != y.name || x.entries.size() != y.entries.size()) return false;
        for (std::size_t j = 0; j < x.entries.size(); ++j) {
            if (x.entries[j].first != y.entries[j].first) return false;
            const TomlValue &u = x.entries[j].second, &v = y.entries[j].second;
            if (u.kind != v.kind) return false;
            if (u.b != v.b || u.i != v.i || u.s != v.s || u.texts != v.texts) return false;
            if (fmt17(u.d) != fmt17(v.d) || u.nums.size() != v.nums.size()) return false;
            for (std::size_t k = 0; k < u.nums.size(); ++k)
                if (fmt17(u.nums[k]) != fmt17(v.nums[k])) return false;
        }
    }
    return true;
}

TomlDoc parse_toml(const std::string& text) {
    TomlDoc doc;
    TomlSection* cur = nullptr;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[' && s.back() == ']' && s.find('=') == std::string::npos) {
            std::string name = trim(s.substr(1, s.size() - 2));
            if (!valid_key(name))
                throw config_error(str_printf("toml: line %d: bad section name", line));
            if (doc.find(name))
                throw config_error(
                    str_printf("toml: line %d: duplicate section '%s'", line, name.c_str()));
            cur = &doc.section(name);
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error(str_printf("toml: line %d: expected key = value", line));
        std::string key = trim(s.substr(0, eq));
        if (!valid_key(key)) throw config_error(str_printf("toml: line %d: bad key", line));
        if (!cur) throw config_error(str_printf("toml: line %d: key before any section", line));
        if (cur->find(key))
            throw config_error(
                str_printf("toml: line %d: duplicate key '%s'", line, key.c_str()));
        cur->entries.emplace_back(key, parse_value(trim(s.substr(eq + 1)), line));
    }
    return doc;
}

std::string write_toml(const TomlDoc& doc) {
    std::ostringstream os;
    for (std::size_t i = 0; i < doc.sections.size(); ++i) {
        if (i) os << '\n';
        os << '[' << doc.sections[i].name << "]\n";
        for (const auto& e : doc.sections[i].entries) {
            os << e.first << " = ";
            write_value(os, e.second);
            os << '\n';
        }
    }
    return os.str();
}

TomlDoc load_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("toml: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_toml(buf.str());
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace wfqh
