#include "wfqh/scenario.hpp"

#include <cmath>

namespace wfqh {

namespace {

const TomlSection& need_section(const TomlDoc& doc, const std::string& name) {
    const TomlSection* s = doc.find(name);
    if (!s) throw config_error("scenario: missing [" + name + "] section");
    return *s;
}

const TomlValue& need(const TomlSection& sec, const std::string& key) {
    const TomlValue* v = sec.find(key);
    if (!v) throw config_error("scenario: [" + sec.name + "] is missing '" + key + "'");
    return *v;
}

double get_real(const TomlSection& sec, const std::string& key, double fallback) {
    const TomlValue* v = sec.find(key);
    return v ? v->as_real() : fallback;
}

void check_window(double t0, double t1, const char* what) {
    if (!(t0 < t1)) throw config_error(str_printf("scenario: empty %s window", what));
    if (!(-M_PI < t0 && t1 < M_PI))
        throw config_error(str_printf("scenario: %s window must sit inside (-pi, pi)", what));
}

void parse_family(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& fam = need_section(doc, "family");
    scn.family.c_a = need(fam, "c_a").as_real();
    scn.family.c_V = need(fam, "c_V").as_real();
    scn.family.epsilon = need(fam, "epsilon").as_real();
    std::string shape = need(fam, "t_shape").as_text();
    if (shape == "constant")
        scn.family.t_shape = TimeShape::constant_one;
    else if (shape == "gaussian")
        scn.family.t_shape = TimeShape::gaussian;
    else
        throw config_error("scenario: t_shape must be constant or gaussian");
    scn.family.x_center = get_real(fam, "x_center", 0.0);
}

void parse_base(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& base = need_section(doc, "base");
    scn.s = need(base, "s").as_real();
    scn.y = Vec{need(base, "y").as_real()};
    scn.sigma = need(base, "sigma").as_real();
    scn.eta = Vec{need(base, "eta").as_real()};
    if (!(scn.s > -M_PI && scn.s < M_PI))
        throw config_error("scenario: base s must lie in (-pi, pi)");
}

void parse_phi(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& phi = need_section(doc, "phi");
    std::string type = need(phi, "type").as_text();
    if (type == "coherent") {
        scn.phi.type = PhiSpec::Type::coherent;
        scn.phi.y = need(phi, "y").as_real();
        scn.phi.eta = need(phi, "eta").as_real();
        scn.phi.h_scale = need(phi, "h_scale").as_real();
        if (!(scn.phi.h_scale > 0.0))
            throw config_error("scenario: coherent h_scale must be positive");
    } else if (type == "singular") {
        scn.phi.type = PhiSpec::Type::singular;
        scn.phi.y = need(phi, "y").as_real();
        scn.phi.s0 = need(phi, "s0").as_real();
        scn.phi.width = need(phi, "width").as_real();
        if (!(scn.phi.s0 > 0.5 && scn.phi.s0 < 1.0))
            throw config_error("scenario: singular exponent must lie in (0.5, 1)");
        if (!(scn.phi.width > 0.0))
            throw config_error("scenario: singular width must be positive");
    } else {
        throw config_error("scenario: phi type must be coherent or singular");
    }
}

void parse_grid(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& grid = need_section(doc, "grid");
    scn.grid_n = static_cast<int>(need(grid, "n").as_int());
    scn.grid_half_width = need(grid, "half_width").as_real();
    make_grid(scn.grid_n, scn.grid_half_width);  // reject bad sizes at load
}

void parse_time(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& time = need_section(doc, "time");
    scn.t0 = need(time, "t0").as_real();
    scn.t1 = need(time, "t1").as_real();
    scn.n_t = static_cast<int>(need(time, "n_t").as_int());
    check_window(scn.t0, scn.t1, "time");
    if (scn.n_t < 8) throw config_error("scenario: n_t must be at least 8");
}

void parse_propagator(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& prop = need_section(doc, "propagator");
    scn.prop.dt = need(prop, "dt").as_real();
    if (const TomlValue* v = prop.find("force_numeric")) scn.prop.force_numeric = v->as_bool();
    if (!(scn.prop.dt > 0.0)) throw config_error("scenario: propagator dt must be positive");
}

void parse_probe(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& probe = need_section(doc, "probe");
    scn.h_list = need(probe, "h_list").as_reals();
    scn.w_t = need(probe, "w_t").as_real();
    scn.w_x = need(probe, "w_x").as_real();
    scn.freq_width = need(probe, "freq_width").as_real();
    if (scn.h_list.empty()) throw config_error("scenario: h_list must be nonempty");
    for (std::size_t i = 0; i < scn.h_list.size(); ++i) {
        if (!(scn.h_list[i] > 0.0)) throw config_error("scenario: h_list must be positive");
        if (i > 0 && !(scn.h_list[i] < scn.h_list[i - 1]))
            throw config_error("scenario: h_list must be strictly descending");
    }
    if (!(scn.w_t > 0.0 && scn.w_x > 0.0 && scn.freq_width > 0.0))
        throw config_error("scenario: probe widths must be positive");
}

void parse_thresholds(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& th = need_section(doc, "thresholds");
    scn.thresholds.alpha_low = need(th, "alpha_low").as_real();
    scn.thresholds.alpha_high = need(th, "alpha_high").as_real();
    scn.thresholds.floor = need(th, "floor").as_real();
    if (!(scn.thresholds.alpha_low < scn.thresholds.alpha_high))
        throw config_error("scenario: alpha_low must be below alpha_high");
    if (!(scn.thresholds.floor > 0.0)) throw config_error("scenario: floor must be positive");
}

void parse_lattice(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& lat = need_section(doc, "lattice");
    const Vec& ds = need(lat, "ds").as_reals();
    const Vec& dy = need(lat, "dy").as_reals();
    const Vec& deta = need(lat, "deta").as_reals();
    if (ds.size() != dy.size() || ds.size() != deta.size() || ds.empty())
        throw config_error("scenario: lattice arrays must be nonempty and equal length");
    for (std::size_t i = 0; i < ds.size(); ++i)
        scn.lattice.push_back({ds[i], dy[i], deta[i]});
    for (const LatticePoint& p : scn.lattice) {
        double si = scn.s + p.ds;
        if (!(si > -M_PI && si < M_PI))
            throw config_error("scenario: lattice point leaves (-pi, pi)");
        if (scn.eta[0] + p.deta == 0.0)
            throw config_error("scenario: lattice point has zero frequency");
    }
}

void parse_egorov(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& eg = need_section(doc, "egorov");
    scn.kappa_grid = need(eg, "kappa_grid").as_reals();
    scn.eg_t0 = need(eg, "t0").as_real();
    scn.eg_t1 = need(eg, "t1").as_real();
    scn.eg_n_t = static_cast<int>(need(eg, "n_t").as_int());
    check_window(scn.eg_t0, scn.eg_t1, "egorov");
    if (scn.kappa_grid.empty() || scn.kappa_grid.front() != 0.0)
        throw config_error("scenario: kappa grid must start at 0");
    for (std::size_t i = 0; i < scn.kappa_grid.size(); ++i) {
        double k = scn.kappa_grid[i];
        if (!(k >= 0.0 && k <= 1.0))
            throw config_error("scenario: kappa grid must lie in [0, 1]");
        if (i > 0 && !(k > scn.kappa_grid[i - 1]))
            throw config_error("scenario: kappa grid must be ascending");
    }
    if (scn.eg_n_t < 8) throw config_error("scenario: egorov n_t must be at least 8");
}

void parse_propagate(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& pr = need_section(doc, "propagate");
    scn.check_t = need(pr, "check_t").as_real();
    scn.dt_halving = need(pr, "dt_halving").as_reals();
    scn.dt_ref = need(pr, "dt_ref").as_real();
    if (!(std::abs(scn.check_t) < M_PI))
        throw config_error("scenario: check_t must lie in (-pi, pi)");
    for (std::size_t i = 0; i < scn.dt_halving.size(); ++i) {
        if (!(scn.dt_halving[i] > 0.0))
            throw config_error("scenario: dt_halving must be positive");
        if (i > 0 && !(scn.dt_halving[i] < scn.dt_halving[i - 1]))
            throw config_error("scenario: dt_halving must be strictly descending");
    }
    if (!scn.dt_halving.empty() && !(scn.dt_ref < scn.dt_halving.back() / 2))
        throw config_error("scenario: dt_ref must undercut the halving list");
}

void parse_classical(const TomlDoc& doc, Scenario& scn) {
    const TomlSection& cl = need_section(doc, "classical");
    scn.mourre_lambdas = need(cl, "mourre_lambdas").as_reals();
    scn.mourre_delta = need(cl, "mourre_delta").as_real();
    scn.kappa_list = need(cl, "kappa_list").as_reals();
    for (double l : scn.mourre_lambdas)
        if (!(l > 1.0)) throw config_error("scenario: mourre lambdas must exceed 1");
    if (!(scn.mourre_delta > 0.0 && scn.mourre_delta <= 1.0))
        throw config_error("scenario: mourre_delta must lie in (0, 1]");
    for (double k : scn.kappa_list)
        if (!(k >= 0.0 && k <= 1.0))
            throw config_error("scenario: kappa_list must lie in [0, 1]");
}

}  // namespace

const char* kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::classical: return "classical";
        case ScenarioKind::propagate: return "propagate";
        case ScenarioKind::wf: return "wf";
        case ScenarioKind::egorov: return "egorov";
        case ScenarioKind::theorem: return "theorem";
    }
    return "?";
}

ScenarioKind kind_from_name(const std::string& name) {
    for (ScenarioKind k : {ScenarioKind::classical, ScenarioKind::propagate, ScenarioKind::wf,
                           ScenarioKind::egorov, ScenarioKind::theorem})
        if (name == kind_name(k)) return k;
    throw config_error("scenario: unknown kind '" + name + "'");
}

Scenario scenario_from_toml(const TomlDoc& doc) {
    Scenario scn;
    const TomlSection& run = need_section(doc, "run");
    scn.kind = kind_from_name(need(run, "kind").as_text());
    scn.seed = static_cast<std::uint64_t>(need(run, "seed").as_int());

    parse_family(doc, scn);
    make_family(scn.family);  // full family validation

    switch (scn.kind) {
        case ScenarioKind::classical:
            parse_base(doc, scn);
            parse_classical(doc, scn);
            break;
        case ScenarioKind::propagate:
            parse_phi(doc, scn);
            parse_grid(doc, scn);
            parse_propagator(doc, scn);
            parse_propagate(doc, scn);
            break;
        case ScenarioKind::wf:
            parse_base(doc, scn);
            parse_phi(doc, scn);
            parse_grid(doc, scn);
            parse_time(doc, scn);
            parse_propagator(doc, scn);
            parse_probe(doc, scn);
            parse_thresholds(doc, scn);
            break;
        case ScenarioKind::egorov:
            parse_base(doc, scn);
            parse_phi(doc, scn);
            parse_grid(doc, scn);
            parse_propagator(doc, scn);
            parse_probe(doc, scn);
            parse_egorov(doc, scn);
            break;
        case ScenarioKind::theorem:
            parse_base(doc, scn);
            parse_phi(doc, scn);
            parse_grid(doc, scn);
            parse_time(doc, scn);
            parse_propagator(doc, scn);
            parse_probe(doc, scn);
            parse_thresholds(doc, scn);
            parse_lattice(doc, scn);
            break;
    }
    if (scn.kind != ScenarioKind::classical) build_phi(scn);  // state constructible on grid
    return scn;
}

Scenario load_scenario(const std::string& path) {
    return scenario_from_toml(load_toml_file(path));
}

TomlDoc scenario_to_toml(const Scenario& scn) {
    TomlDoc doc;
    TomlSection& run = doc.section("run");
    run.set("kind", TomlValue::text(kind_name(scn.kind)));
    run.set("seed", TomlValue::integer(static_cast<std::int64_t>(scn.seed)));

    TomlSection& fam = doc.section("family");
    fam.set("c_a", TomlValue::real(scn.family.c_a));
    fam.set("c_V", TomlValue::real(scn.family.c_V));
    fam.set("epsilon", TomlValue::real(scn.family.epsilon));
    fam.set("t_shape", TomlValue::text(scn.family.t_shape == TimeShape::gaussian ? "gaussian"
                                                                                 : "constant"));
    if (scn.family.x_center != 0.0) fam.set("x_center", TomlValue::real(scn.family.x_center));

    bool has_base = scn.kind != ScenarioKind::propagate;
    if (has_base) {
        TomlSection& base = doc.section("base");
        base.set("s", TomlValue::real(scn.s));
        base.set("y", TomlValue::real(scn.y[0]));
        base.set("sigma", TomlValue::real(scn.sigma));
        base.set("eta", TomlValue::real(scn.eta[0]));
    }
    if (scn.kind != ScenarioKind::classical) {
        TomlSection& phi = doc.section("phi");
        if (scn.phi.type == PhiSpec::Type::coherent) {
            phi.set("type", TomlValue::text("coherent"));
            phi.set("y", TomlValue::real(scn.phi.y));
            phi.set("eta", TomlValue::real(scn.phi.eta));
            phi.set("h_scale", TomlValue::real(scn.phi.h_scale));
        } else {
            phi.set("type", TomlValue::text("singular"));
            phi.set("y", TomlValue::real(scn.phi.y));
            phi.set("s0", TomlValue::real(scn.phi.s0));
            phi.set("width", TomlValue::real(scn.phi.width));
        }
        TomlSection& grid = doc.section("grid");
        grid.set("n", TomlValue::integer(scn.grid_n));
        grid.set("half_width", TomlValue::real(scn.grid_half_width));
    }
    if (scn.kind == ScenarioKind::wf || scn.kind == ScenarioKind::theorem) {
        TomlSection& time = doc.section("time");
        time.set("t0", TomlValue::real(scn.t0));
        time.set("t1", TomlValue::real(scn.t1));
        time.set("n_t", TomlValue::integer(scn.n_t));
    }
    if (scn.kind != ScenarioKind::classical) {
        TomlSection& prop = doc.section("propagator");
        prop.set("dt", TomlValue::real(scn.prop.dt));
        if (scn.prop.force_numeric) prop.set("force_numeric", TomlValue::boolean(true));
    }
    if (scn.kind == ScenarioKind::wf || scn.kind == ScenarioKind::egorov ||
        scn.kind == ScenarioKind::theorem) {
        TomlSection& probe = doc.section("probe");
        probe.set("h_list", TomlValue::reals(scn.h_list));
        probe.set("w_t", TomlValue::real(scn.w_t));
        probe.set("w_x", TomlValue::real(scn.w_x));
        probe.set("freq_width", TomlValue::real(scn.freq_width));
    }
    if (scn.kind == ScenarioKind::wf || scn.kind == ScenarioKind::theorem) {
        TomlSection& th = doc.section("thresholds");
        th.set("alpha_low", TomlValue::real(scn.thresholds.alpha_low));
        th.set("alpha_high", TomlValue::real(scn.thresholds.alpha_high));
        th.set("floor", TomlValue::real(scn.thresholds.floor));
    }
    if (scn.kind == ScenarioKind::theorem) {
        Vec ds, dy, deta;
        for (const LatticePoint& p : scn.lattice) {
            ds.push_back(p.ds);
            dy.push_back(p.dy);
            deta.push_back(p.deta);
        }
        TomlSection& lat = doc.section("lattice");
        lat.set("ds", TomlValue::reals(ds));
        lat.set("dy", TomlValue::reals(dy));
        lat.set("deta", TomlValue::reals(deta));
    }
    if (scn.kind == ScenarioKind::egorov) {
        TomlSection& eg = doc.section("egorov");
        eg.set("kappa_grid", TomlValue::reals(scn.kappa_grid));
        eg.set("t0", TomlValue::real(scn.eg_t0));
        eg.set("t1", TomlValue::real(scn.eg_t1));
        eg.set("n_t", TomlValue::integer(scn.eg_n_t));
    }
    if (scn.kind == ScenarioKind::propagate) {
        TomlSection& pr = doc.section("propagate");
        pr.set("check_t", TomlValue::real(scn.check_t));
        pr.set("dt_halving", TomlValue::reals(scn.dt_halving));
        pr.set("dt_ref", TomlValue::real(scn.dt_ref));
    }
    if (scn.kind == ScenarioKind::classical) {
        TomlSection& cl = doc.section("classical");
        cl.set("mourre_lambdas", TomlValue::reals(scn.mourre_lambdas));
        cl.set("mourre_delta", TomlValue::real(scn.mourre_delta));
        cl.set("kappa_list", TomlValue::reals(scn.kappa_list));
    }
    return doc;
}

PerturbationField scenario_field(const Scenario& scn) { return make_family(scn.family); }

SpatialGrid scenario_grid(const Scenario& scn) {
    return make_grid(scn.grid_n, scn.grid_half_width);
}

WaveFunction build_phi(const Scenario& scn) {
    SpatialGrid g = scenario_grid(scn);
    if (scn.phi.type == PhiSpec::Type::coherent)
        return coherent_state(g, scn.phi.y, scn.phi.eta, scn.phi.h_scale);
    return singular_state(g, scn.phi.y, scn.phi.s0, scn.phi.width);
}

}  // namespace wfqh
