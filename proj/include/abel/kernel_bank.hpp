#pragma once

// Fixed composite Gauss-Legendre evaluation of kernel families in quad
// precision. Panels are graded towards the complex singularities of
// |1 + rho - cos(theta)|^beta for the closest rho of the window, so one
// node set serves every rho in it and every derivative order at once.

#include "abel/quadrature.hpp"
#include "abel/wide.hpp"

#include <vector>

namespace abel {

class KernelBank {
public:
    // rho window [rho_lo, rho_hi] inside one component of the reduced annulus.
    KernelBank(std::vector<BasisTerm> terms, double rho_lo, double rho_hi);

    size_t size() const { return terms_.size(); }
    const std::vector<BasisTerm>& terms() const { return terms_; }
    double rho_lo() const { return lo_; }
    double rho_hi() const { return hi_; }
    size_t node_count() const;

    // out[j * N + i] = d^j/drho^j of member i, for j = 0..order.
    void jet(const Wide& rho, int order, std::vector<Wide>& out) const;
    std::vector<Wide> values(const Wide& rho) const;

    // Pre-contracted evaluator for one coefficient vector.
    class Combination {
    public:
        Wide operator()(const Wide& rho) const;
        double operator()(double rho) const { return static_cast<double>((*this)(Wide(rho))); }
        // first rho-derivative
        Wide derivative(const Wide& rho) const;

    private:
        friend class KernelBank;
        struct Group {
            size_t group;
            std::vector<Wide> weights;
        };
        const KernelBank* bank_ = nullptr;
        std::vector<Group> groups_;
        Wide c_const_ = 0, c_pow_ = 0, c_pow2_ = 0;
        double beta_pow_ = 0, beta_pow2_ = 0;
    };

    Combination combine(const std::vector<Wide>& coeffs) const;

private:
    struct Group {
        Segment E;
        double beta;
        std::vector<Wide> theta, half_sin2, half_cos2, weight;
        std::vector<size_t> members;
        std::vector<std::vector<Wide>> trig;  // weight * trig factor per member
    };
    void build_group(Group& g) const;
    // |base| at each node and the branch sign
    int bases(const Group& g, const Wide& rho, std::vector<Wide>& b) const;

    std::vector<BasisTerm> terms_;
    std::vector<Group> groups_;
    std::vector<int> group_of_;
    double lo_, hi_;
    double sing_imag_;
    int branch_;
};

}  // namespace abel
