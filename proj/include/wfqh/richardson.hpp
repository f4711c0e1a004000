// Richardson-style extrapolation of parameterized limits: polynomial
// extrapolation to u = 0 in the variable u = lambda^{-eps} through all schedule
// nodes (Neville tableau). Used for the high-energy lambda -> infinity limits.
#pragma once

#include <cmath>

#include "wfqh/numerics.hpp"

namespace wfqh {

struct Extrapolation {
    double limit = 0.0;
    Vec residuals;  // |value_k - limit| per node, schedule order
};

// lambdas strictly increasing, values paired; eps > 0 is the leading decay rate
// of value(lambda) - limit. Exact polynomial interpolation in u evaluated at 0;
// appropriate because node values come from tight-tolerance integrations.
inline Extrapolation extrapolate_powerlaw(const Vec& lambdas, const Vec& values, double eps) {
    const std::size_t n = lambdas.size();
    if (n < 2 || values.size() != n)
        throw numeric_error("extrapolate_powerlaw: need >= 2 paired nodes");
    if (eps <= 0) throw config_error("extrapolate_powerlaw: eps must be positive");
    for (std::size_t i = 1; i < n; ++i)
        if (lambdas[i] <= lambdas[i - 1])
            throw config_error("extrapolate_powerlaw: schedule must be strictly increasing");

    Vec u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::pow(lambdas[i], -eps);

    // T[i] holds the current tableau column: poly through nodes i..i+j at u=0.
    Vec T = values;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i + j < n; ++i)
            T[i] = (u[i] * T[i + 1] - u[i + j] * T[i]) / (u[i] - u[i + j]);

    Extrapolation out;
    out.limit = T[0];
    out.residuals.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.residuals[k] = std::abs(values[k] - out.limit);
    return out;
}

}  // namespace wfqh
