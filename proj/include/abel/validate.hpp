#pragma once

#include "abel/chebyshev.hpp"
#include "abel/domain.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace abel {

enum class FlowStatus { Completed, Escaped, StepFailure };
std::string status_name(FlowStatus s);

// One orbit of the reduced equation, started at y(0) = rho0.
struct ReturnMapSample {
    double epsilon = 0.0;
    double rho0 = 0.0;
    double rho_end = 0.0;  // y(2pi)
    double displacement = 0.0;
    FlowStatus status = FlowStatus::Completed;
    long steps = 0;
};

struct FlowOptions {
    double rel_tol = -1.0;  // negative: configured default
    double abs_tol = -1.0;  // in units of eps * max |coefficient|
    bool split = true;  // two legs switching at theta1
    long max_steps = 500000;
    double blowup = 1e6;
};

// Integrates u = w - w0(theta), w = (1-p) y, w0 = (1-p)(rho0 + 1 - cos theta).
ReturnMapSample flow_map(const AbelEquation& eq, double epsilon, double rho0, const FlowOptions& opt = {});

struct MelnikovEstimate {
    std::vector<double> eps;
    std::vector<double> ratio;      // displacement / eps
    std::vector<double> residual;   // |ratio - M1 reference|
    std::vector<double> orders;     // between consecutive eps
    double m1_est = 0.0;
    double m2_est = 0.0;
    double observed_order = 0.0;
    bool converged = false;
    std::string note;
};

const std::vector<double>& default_eps_ladder();

// With m1_closed the residuals and the M2 estimate use it, otherwise the
// polynomial extrapolation of displacement / eps is used throughout.
MelnikovEstimate melnikov_estimate(const AbelEquation& eq, double rho, const std::vector<double>& eps_list,
                                   std::optional<double> m1_closed = std::nullopt, const FlowOptions& opt = {});

struct CycleReport {
    ZeroReport zeros;
    int escaped = 0;  // grid samples where the orbit left the annulus
};

CycleReport count_limit_cycles(const AbelEquation& eq, double epsilon, double lo, double hi, int grid = 2048,
                               int jobs = 1, const FlowOptions& opt = {});

struct HilbertEntry {
    int bound = 0;
    int with_zero_cycle = 0;  // bound + 1 when x = 0 is itself a limit cycle (p, q > 0)
    std::string note;
};

HilbertEntry hilbert_table(int m, CaseTag tag, bool p_odd, bool p_q_positive = false);

void write_flow_csv(std::ostream& os, const std::vector<ReturnMapSample>& samples);

}  // namespace abel
