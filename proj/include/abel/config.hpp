#pragma once

#include <string>

namespace abel {

// Default numerical tolerances. Every field can be overridden from the
// environment (ABEL_QUAD_ABS_TOL and friends, see README).
struct Tolerances {
    double quad_abs = 1e-11;
    double quad_rel = 1e-10;
    int quad_budget = 1 << 14;
    double near_boundary = 1e-6;
    double zero_coeff = 1e-12;
    double theta_tag = 1e-12;
    double ode_rel = 1e-12;
    double ode_abs = 1e-14;
    double sign_tol = 1e-12;
    double multiple_root = 1e-8;
    double bracket_width = 1e-10;
    double fit_residual = 1e-7;
    int max_drho_order = 16;
};

// Process-wide tolerances, read once from the environment.
const Tolerances& tolerances();

// Reads `name` from the environment, falling back to `fallback`.
double env_double(const std::string& name, double fallback);
int env_int(const std::string& name, int fallback);

}  // namespace abel
