#include "wfqh/grid.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include <json.hpp>

namespace wfqh {

namespace {

bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

void normalize(WaveFunction& f) {
    double nrm = wf_norm(f);
    if (nrm < 1e-300) throw numeric_error("normalize: zero state");
    for (auto& v : f.values) v /= nrm;
}

}  // namespace

SpatialGrid make_grid(int n, double half_width) {
    if (!is_pow2(n) || n < 8) throw config_error("grid: n must be a power of two >= 8");
    if (!(half_width > 0.0)) throw config_error("grid: half_width must be positive");
    return SpatialGrid{n, half_width};
}

double wf_norm(const WaveFunction& f) {
    double s = 0.0;
    for (const auto& v : f.values) s += std::norm(v);
    return std::sqrt(s * f.grid.dx());
}

Cplx wf_inner(const WaveFunction& f, const WaveFunction& g) {
    if (f.grid != g.grid) throw config_error("wf_inner: grid mismatch");
    Cplx s = 0.0;
    for (int j = 0; j < f.grid.n; ++j) s += std::conj(f.values[j]) * g.values[j];
    return s * f.grid.dx();
}

double wf_distance(const WaveFunction& f, const WaveFunction& g) {
    if (f.grid != g.grid) throw config_error("wf_distance: grid mismatch");
    double s = 0.0;
    for (int j = 0; j < f.grid.n; ++j) s += std::norm(f.values[j] - g.values[j]);
    return std::sqrt(s * f.grid.dx());
}

SpaceTimeField make_field_frame(const SpatialGrid& grid, double t0, double t1, int n_t) {
    if (!(t1 > t0)) throw config_error("field frame: need t1 > t0");
    if (n_t < 2) throw config_error("field frame: need n_t >= 2");
    SpaceTimeField u;
    u.grid = grid;
    u.t0 = t0;
    u.t1 = t1;
    u.n_t = n_t;
    u.rows.assign(n_t, CVec(grid.n, Cplx{0.0, 0.0}));
    return u;
}

double field_norm(const SpaceTimeField& u) {
    double s = 0.0;
    for (const auto& row : u.rows)
        for (const auto& v : row) s += std::norm(v);
    return std::sqrt(s * u.dt() * u.grid.dx());
}

double field_distance(const SpaceTimeField& u, const SpaceTimeField& v) {
    if (u.grid != v.grid || u.n_t != v.n_t) throw config_error("field_distance: frame mismatch");
    double s = 0.0;
    for (int k = 0; k < u.n_t; ++k)
        for (int j = 0; j < u.grid.n; ++j) s += std::norm(u.rows[k][j] - v.rows[k][j]);
    return std::sqrt(s * u.dt() * u.grid.dx());
}

double row_norm_spread(const SpaceTimeField& u) {
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < u.n_t; ++k) {
        double s = 0.0;
        for (const auto& v : u.rows[k]) s += std::norm(v);
        s = std::sqrt(s * u.grid.dx());
        if (k == 0) lo = hi = s;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (hi < 1e-300) return 0.0;
    return (hi - lo) / hi;
}

void save_field(const SpaceTimeField& u, const std::string& path, const std::string& description) {
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw config_error("save_field: cannot open " + path);
    std::vector<double> row_buf(2 * static_cast<std::size_t>(u.grid.n));
    for (const auto& row : u.rows) {
        for (int j = 0; j < u.grid.n; ++j) {
            row_buf[2 * j] = row[j].real();
            row_buf[2 * j + 1] = row[j].imag();
        }
        bin.write(reinterpret_cast<const char*>(row_buf.data()),
                  static_cast<std::streamsize>(row_buf.size() * sizeof(double)));
    }
    if (!bin) throw numeric_error("save_field: write failed for " + path);
    bin.close();

    nlohmann::json meta;
    meta["t0"] = u.t0;
    meta["t1"] = u.t1;
    meta["n_t"] = u.n_t;
    meta["L"] = u.grid.half_width;
    meta["N"] = u.grid.n;
    meta["layout"] = "little-endian row-major interleaved re,im float64";
    if (!description.empty()) meta["description"] = description;
    std::ofstream side(path + ".json");
    if (!side) throw config_error("save_field: cannot open " + path + ".json");
    side << meta.dump(2) << "\n";
}

SpaceTimeField load_field(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw config_error("load_field: missing sidecar " + path + ".json");
    nlohmann::json meta;
    side >> meta;
    SpatialGrid grid = make_grid(meta.at("N").get<int>(), meta.at("L").get<double>());
    SpaceTimeField u = make_field_frame(grid, meta.at("t0").get<double>(),
                                        meta.at("t1").get<double>(), meta.at("n_t").get<int>());
    std::ifstream bin(path, std::ios::binary);
    if (!bin) throw config_error("load_field: cannot open " + path);
    std::vector<double> row_buf(2 * static_cast<std::size_t>(grid.n));
    for (auto& row : u.rows) {
        bin.read(reinterpret_cast<char*>(row_buf.data()),
                 static_cast<std::streamsize>(row_buf.size() * sizeof(double)));
        if (!bin) throw numeric_error("load_field: truncated payload in " + path);
        for (int j = 0; j < grid.n; ++j) row[j] = Cplx{row_buf[2 * j], row_buf[2 * j + 1]};
    }
    return u;
}

WaveFunction coherent_state(const SpatialGrid& grid, double y, double eta, double h_scale) {
    if (!(h_scale > 0.0)) throw config_error("coherent_state: h_scale must be positive");
    WaveFunction f{grid, CVec(grid.n)};
    double amp = std::pow(M_PI * h_scale, -0.25);
    for (int j = 0; j < grid.n; ++j) {
        double x = grid.x(j);
        double g = amp * std::exp(-(x - y) * (x - y) / (2.0 * h_scale));
        f.values[j] = std::polar(g, eta * x / h_scale);
    }
    double edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
    double tail_right = amp * std::exp(-(grid.half_width - std::abs(y)) *
                                       (grid.half_width - std::abs(y)) / (2.0 * h_scale));
    if (std::max(edge, tail_right) > 1e-12)
        throw config_error("coherent_state: Gaussian tail exceeds 1e-12 at the grid boundary");
    normalize(f);
    return f;
}

WaveFunction singular_state(const SpatialGrid& grid, double y0, double s0, double cutoff_width) {
    if (!(s0 > 0.5 && s0 < 1.0)) throw config_error("singular_state: s0 must lie in (0.5, 1)");
    if (!(cutoff_width > 0.0)) throw config_error("singular_state: cutoff_width must be positive");
    WaveFunction f{grid, CVec(grid.n)};
    for (int j = 0; j < grid.n; ++j) {
        double r = grid.x(j) - y0;
        double u = r / cutoff_width;
        double chi = std::abs(u) < 1.0 ? bump(u) : 0.0;
        f.values[j] = chi * std::pow(std::abs(r), s0);
    }
    normalize(f);
    return f;
}

}  // namespace wfqh
