#include "abel/config.hpp"

#include <cstdlib>
#include <stdexcept>

namespace abel {

double env_double(const std::string& name, double fallback)
{
    const char* raw = std::getenv(name.c_str());
    if (!raw || !*raw) return fallback;
    try {
        return std::stod(raw);
    } catch (const std::exception&) {
        return fallback;
    }
}

int env_int(const std::string& name, int fallback)
{
    const char* raw = std::getenv(name.c_str());
    if (!raw || !*raw) return fallback;
    try {
        return std::stoi(raw);
    } catch (const std::exception&) {
        return fallback;
    }
}

const Tolerances& tolerances()
{
    static const Tolerances tol = [] {
        Tolerances t;
        t.quad_abs = env_double("ABEL_QUAD_ABS_TOL", t.quad_abs);
        t.quad_rel = env_double("ABEL_QUAD_REL_TOL", t.quad_rel);
        t.quad_budget = env_int("ABEL_QUAD_BUDGET", t.quad_budget);
        t.near_boundary = env_double("ABEL_NEAR_BOUNDARY", t.near_boundary);
        t.zero_coeff = env_double("ABEL_ZERO_COEFF_TOL", t.zero_coeff);
        t.theta_tag = env_double("ABEL_THETA_TAG_TOL", t.theta_tag);
        t.ode_rel = env_double("ABEL_ODE_REL_TOL", t.ode_rel);
        t.ode_abs = env_double("ABEL_ODE_ABS_TOL", t.ode_abs);
        t.sign_tol = env_double("ABEL_SIGN_TOL", t.sign_tol);
        t.multiple_root = env_double("ABEL_MULTIPLE_ROOT_TOL", t.multiple_root);
        t.bracket_width = env_double("ABEL_BRACKET_WIDTH", t.bracket_width);
        t.fit_residual = env_double("ABEL_FIT_RESIDUAL_TOL", t.fit_residual);
        t.max_drho_order = env_int("ABEL_MAX_DRHO_ORDER", t.max_drho_order);
        return t;
    }();
    return tol;
}

}  // namespace abel
