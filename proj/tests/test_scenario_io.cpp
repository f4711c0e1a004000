#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "wfqh/report.hpp"
#include "wfqh/scenario.hpp"

using namespace wfqh;
namespace fs = std::filesystem;

namespace {

TomlDoc parse(const std::string& text) { return parse_toml(text); }

const char* kMinimalClassical =
    "[run]\n"
    "kind = \"classical\"\n"
    "seed = 7\n"
    "[family]\n"
    "c_a = 0.1\n"
    "c_V = 0.0\n"
    "epsilon = 0.5\n"
    "t_shape = \"constant\"\n"
    "[base]\n"
    "s = 0.5\n"
    "y = 1.0\n"
    "sigma = 0.2\n"
    "eta = 1.0\n"
    "[classical]\n"
    "mourre_lambdas = [100.0]\n"
    "mourre_delta = 0.5\n"
    "kappa_list = [0.5, 1.0]\n";

std::string patched(const std::string& text, const std::string& from, const std::string& to) {
    std::string out = text;
    const std::size_t at = out.find(from);
    REQUIRE(at != std::string::npos);
    out.replace(at, from.size(), to);
    return out;
}

}  // namespace

TEST_CASE("toml parsing handles scalars, arrays, comments, and strings") {
    TomlDoc doc = parse(
        "# leading comment\n"
        "[alpha]\n"
        "flag = true\n"
        "count = 12\n"
        "ratio = 0.5  # trailing comment\n"
        "name = \"has # inside\"\n"
        "values = [1.0, 2.5, -3.0]\n"
        "names = [\"a\", \"b\"]\n");
    const TomlSection* sec = doc.find("alpha");
    REQUIRE(sec != nullptr);
    CHECK(sec->find("flag")->as_bool() == true);
    CHECK(sec->find("count")->as_int() == 12);
    CHECK(sec->find("count")->as_real() == 12.0);  // integers widen
    CHECK(sec->find("ratio")->as_real() == 0.5);
    CHECK(sec->find("name")->as_text() == "has # inside");
    CHECK(sec->find("values")->as_reals() == Vec{1.0, 2.5, -3.0});
    CHECK(sec->find("names")->as_texts() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("toml parse errors carry line numbers and causes") {
    CHECK_THROWS_AS(parse("key = 1\n"), config_error);          // entry before any section
    CHECK_THROWS_AS(parse("[a]\nkey 1\n"), config_error);       // missing equals
    CHECK_THROWS_AS(parse("[a]\nk = 1\nk = 2\n"), config_error);
    CHECK_THROWS_AS(parse("[a]\n[a]\n"), config_error);
    CHECK_THROWS_AS(parse("[a]\nk = what\n"), config_error);
    CHECK_THROWS_WITH_AS(parse("[a]\nk = \"x\"\n[b]\nk = [1.0, \"x\"]\n"),
                         doctest::Contains("line 4"), config_error);
}

TEST_CASE("typed access rejects mismatched kinds") {
    TomlDoc doc = parse("[a]\nnum = 1.5\narr = [1.0]\n");
    const TomlSection* sec = doc.find("a");
    CHECK_THROWS_AS(sec->find("num")->as_texts(), config_error);
    CHECK_THROWS_AS(sec->find("num")->as_int(), config_error);
    CHECK_THROWS_AS(sec->find("arr")->as_real(), config_error);
}

TEST_CASE("write then reparse then write is byte stable") {
    TomlDoc doc;
    TomlSection& s = doc.section("mix");
    s.set("flag", TomlValue::boolean(false));
    s.set("count", TomlValue::integer(-4));
    s.set("tiny", TomlValue::real(0.1));
    s.set("whole", TomlValue::real(3.0));
    s.set("label", TomlValue::text("x"));
    s.set("grid", TomlValue::reals({1.0 / 3.0, 2e-17}));
    const std::string once = write_toml(doc);
    const std::string twice = write_toml(parse(once));
    CHECK(once == twice);
}

TEST_CASE("csv cells are lossless decimal") {
    CHECK(csv_cell(1.0) == "1");
    CHECK(std::strtod(csv_cell(0.1).c_str(), nullptr) == 0.1);
    CHECK(std::strtod(csv_cell(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
    CHECK(std::strtod(csv_cell(-2.5e-17).c_str(), nullptr) == -2.5e-17);
}

TEST_CASE("csv tables enforce row width and render deterministically") {
    CsvTable t;
    t.header = {"a", "b"};
    t.add_row({"1", "2"});
    CHECK_THROWS_AS(t.add_row({"only"}), config_error);
    CHECK(t.to_string() == "a,b\n1,2\n");
    CsvTable empty;
    empty.header = {"x", "y"};
    CHECK(empty.to_string() == "x,y\n");  // header-only when there are no rows
}

TEST_CASE("check lines format and aggregate") {
    CheckLine good{"bounded", 0.5, 1.0, true, ""};
    CheckLine bad{"bounded", 2.0, 1.0, false, "why"};
    CHECK(format_check(good).find("[PASS]") == 0);
    CHECK(format_check(bad).find("[FAIL]") == 0);
    CHECK(format_check(bad).find("why") != std::string::npos);
    CHECK(all_pass({good}));
    CHECK_FALSE(all_pass({good, bad}));
    CHECK(checks_table({good, bad}).rows.size() == 2);
}

TEST_CASE("loglog figure is deterministic and annotates fitted slopes") {
    SeriesPlot plot;
    plot.title = "decay";
    plot.x_label = "h";
    plot.y_label = "N";
    SeriesPlot::Series s;
    s.label = "probe";
    s.x = {0.4, 0.2, 0.1};
    s.y = {1e-2, 4e-3, 1.6e-3};
    s.fit = true;
    s.slope = 1.32;
    plot.series.push_back(s);
    const std::string svg = render_svg_loglog(plot);
    CHECK(svg == render_svg_loglog(plot));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("slope = 1.320") != std::string::npos);
}

TEST_CASE("scenario validation rejects broken inputs") {
    const std::string base = kMinimalClassical;
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(base, "kind = \"classical\"",
                                                     "kind = \"other\""))),
                    config_error);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(base, "s = 0.5", "s = 3.2"))), config_error);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(base, "c_a = 0.1", "c_a = 1.5"))),
                    config_error);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(base, "mourre_delta = 0.5",
                                                     "mourre_delta = 1.5"))),
                    config_error);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(base, "kappa_list = [0.5, 1.0]",
                                                     "kappa_list = [0.5, 1.25]"))),
                    config_error);
    // missing section
    CHECK_THROWS_WITH_AS(scenario_from_toml(parse(patched(base, "[classical]", "[other]"))),
                         doctest::Contains("[classical]"), config_error);
}

TEST_CASE("wf scenario validation covers probe and threshold rules") {
    const std::string wf =
        "[run]\nkind = \"wf\"\nseed = 1\n"
        "[family]\nc_a = 0.0\nc_V = 0.0\nepsilon = 0.5\nt_shape = \"constant\"\n"
        "[base]\ns = 0.2\ny = 0.5\nsigma = 0.0\neta = 2.0\n"
        "[phi]\ntype = \"singular\"\ny = 0.0\ns0 = 0.75\nwidth = 1.0\n"
        "[grid]\nn = 64\nhalf_width = 6.0\n"
        "[time]\nt0 = -0.4\nt1 = 0.4\nn_t = 16\n"
        "[propagator]\ndt = 1.0e-3\n"
        "[probe]\nh_list = [0.4, 0.3]\nw_t = 0.15\nw_x = 0.6\nfreq_width = 0.3\n"
        "[thresholds]\nalpha_low = 1.0\nalpha_high = 3.0\nfloor = 1.0e-9\n";
    CHECK(scenario_from_toml(parse(wf)).kind == ScenarioKind::wf);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(wf, "h_list = [0.4, 0.3]",
                                                     "h_list = [0.3, 0.4]"))),
                    config_error);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(wf, "h_list = [0.4, 0.3]",
                                                     "h_list = []"))),
                    config_error);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(wf, "alpha_low = 1.0", "alpha_low = 4.0"))),
                    config_error);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(wf, "t1 = 0.4", "t1 = 3.2"))), config_error);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(wf, "n = 64", "n = 65"))), config_error);
    CHECK_THROWS_AS(scenario_from_toml(parse(patched(wf, "s0 = 0.75", "s0 = 0.4"))), config_error);
}

TEST_CASE("shipped scenario files load and re-serialize to the same document") {
    const char* env = std::getenv("WFQH_SCENARIO_DIR");
    const fs::path dir = env ? env : WFQH_SCENARIO_DIR;
    REQUIRE(fs::is_directory(dir));
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".toml") continue;
        ++seen;
        CAPTURE(entry.path().filename().string());
        const TomlDoc doc = load_toml_file(entry.path().string());
        const Scenario scn = scenario_from_toml(doc);
        CHECK(toml_equal(doc, scenario_to_toml(scn)));
        // serialized form reloads to the identical document
        const TomlDoc again = parse(write_toml(scenario_to_toml(scn)));
        CHECK(toml_equal(scenario_to_toml(scenario_from_toml(again)), again));
    }
    CHECK(seen >= 9);
}

TEST_CASE("text file round trip") {
    const fs::path p = fs::temp_directory_path() / "wfqh_io_check.txt";
    write_text_file(p.string(), "line\nanother\n");
    CHECK(read_text_file(p.string()) == "line\nanother\n");
    fs::remove(p);
    CHECK_THROWS_AS(read_text_file((p / "missing").string()), config_error);
}
