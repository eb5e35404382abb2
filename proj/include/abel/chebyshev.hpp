#pragma once

#include "abel/domain.hpp"
#include "abel/kernel_bank.hpp"
#include "abel/quadrature.hpp"
#include "abel/wide.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace abel {

// Ordered analytic functions on an open interval, with derivative jets.
class FunctionFamily {
public:
    virtual ~FunctionFamily() = default;
    virtual size_t size() const = 0;
    virtual RealInterval interval() const = 0;
    virtual int max_order() const = 0;
    // out[j * size() + i] = f_i^{(j)}(t), j = 0..order
    virtual void jet(const Wide& t, int order, std::vector<Wide>& out) const = 0;
    virtual std::string name(size_t i) const = 0;

    std::vector<Wide> values(const Wide& t) const;
    std::string describe() const;
};

// Members built from 1, theta, cos(k theta), sin(k theta) and theta times those.
struct TrigMember {
    enum Type { One, Theta, Cos, Sin, ThetaCos, ThetaSin } type;
    int k = 0;
};

class TrigFamily : public FunctionFamily {
public:
    explicit TrigFamily(std::vector<TrigMember> members, RealInterval iv = {0.0, kPi});
    size_t size() const override { return members_.size(); }
    RealInterval interval() const override { return iv_; }
    int max_order() const override { return 64; }
    void jet(const Wide& t, int order, std::vector<Wide>& out) const override;
    std::string name(size_t i) const override;

private:
    std::vector<TrigMember> members_;
    RealInterval iv_;
};

// Kernel family evaluated in quad precision through a KernelBank.
class KernelFamily : public FunctionFamily {
public:
    KernelFamily(std::vector<BasisTerm> terms, double lo, double hi);
    size_t size() const override { return bank_.size(); }
    RealInterval interval() const override { return {bank_.rho_lo(), bank_.rho_hi()}; }
    int max_order() const override { return 40; }
    void jet(const Wide& t, int order, std::vector<Wide>& out) const override;
    std::string name(size_t i) const override { return abel::describe(bank_.terms()[i]); }
    const KernelBank& bank() const { return bank_; }

private:
    KernelBank bank_;
};

// Same family through the double-precision adaptive route (eval_basis_drho).
class AdaptiveKernelFamily : public FunctionFamily {
public:
    AdaptiveKernelFamily(std::vector<BasisTerm> terms, double lo, double hi);
    size_t size() const override { return terms_.size(); }
    RealInterval interval() const override { return {lo_, hi_}; }
    int max_order() const override;
    void jet(const Wide& t, int order, std::vector<Wide>& out) const override;
    std::string name(size_t i) const override { return abel::describe(terms_[i]); }

private:
    std::vector<BasisTerm> terms_;
    double lo_, hi_;
};

// Families whose Chebyshev property is asserted.
std::vector<TrigMember> family_cos_sin(int n);              // (1, c1..cn, sn..s1)
std::vector<TrigMember> family_theta_cos(int n);            // (1, t, s1, c1, t c1, ...)
std::vector<TrigMember> family_theta_sin(int n);            // (1, c1, s1, t s1, ...)
std::vector<TrigMember> family_mixed(int n0, int k0, int l0);

// Kernel families with J1 = [0, vartheta], J2 = [vartheta, pi].
std::vector<BasisTerm> family_kernel_i(int n, double vartheta, double beta);
std::vector<BasisTerm> family_kernel_ii(int m, int n, double vartheta, double beta);
std::vector<BasisTerm> family_kernel_iii(int m, int n, double vartheta, double beta);
std::vector<BasisTerm> family_kernel_pi(int m, double beta);  // (1, rho^b, (rho+2)^b, C.., S..)

Wide continuous_wronskian(const FunctionFamily& f, const Wide& t, int size);
Wide discrete_wronskian(const FunctionFamily& f, const std::vector<Wide>& nodes);

struct GridSpec {
    int points = 400;
    double lo = 0.0;  // both zero: the family's interval
    double hi = 0.0;
    bool geometric = false;  // spacing uniform in log distance to `anchor`
    double anchor = 0.0;
    int tuples = 200;  // ordered node tuples per size for discrete Wronskians
    unsigned seed = 1;
};

std::vector<double> make_grid(const GridSpec& g, RealInterval fallback);

struct SubfamilyStats {
    int size = 0;
    double min_abs = 0.0;
    double max_abs = 0.0;
    double argmin = 0.0;
    int sign = 0;
    bool sign_constant = true;
    double disc_min_abs = 0.0;
    bool disc_sign_constant = true;
};

struct WronskianReport {
    std::vector<SubfamilyStats> sizes;
    int points = 0;
    bool ect = true;  // every leading Wronskian nonzero without sign change
    bool ct = true;   // every discrete Wronskian keeps its sign
    std::string resolution;
};

WronskianReport verify_ect(const FunctionFamily& f, const GridSpec& grid);

struct ZeroOptions {
    int initial = 2048;
    int max_grid = 1 << 16;
    double bracket_width = -1.0;  // negative: configured default
    double sign_tol = -1.0;
    double multiple_tol = -1.0;
    bool geometric = false;
    double anchor = 0.0;
    int jobs = 1;  // threads for grid evaluation; f must then be thread-safe
};

struct Zero {
    double lo = 0.0, hi = 0.0;
    double location = 0.0;
    int sign_left = 0;
    double derivative = 0.0;
    bool possibly_multiple = false;
};

struct ZeroReport {
    std::vector<Zero> zeros;
    int count = 0;
    int simple_count = 0;
    bool certified = false;
    int grid = 0;
    std::string note;
};

ZeroReport count_zeros(const std::function<double(double)>& f, double lo, double hi, const ZeroOptions& opt = {});

struct BoundCheck {
    bool ok = true;
    int trials = 0;
    int bound = 0;
    int max_random = 0;        // most zeros seen among random unit vectors
    int max_interpolated = 0;  // most zeros seen among node-interpolating trials
    std::vector<double> counterexample;
};

BoundCheck cheb_bound_check(const FunctionFamily& f, int trials, unsigned seed = 7, int interpolating = 40,
                            const GridSpec& grid = {});

}  // namespace abel
