#pragma once

// Quad precision helpers. Wronskians, realizations and zero scans of
// near-dependent kernel families lose ~20 digits to cancellation, so they
// run in binary128.

#include <boost/multiprecision/float128.hpp>

#include <string>
#include <vector>

namespace abel {

using Wide = boost::multiprecision::float128;

Wide wide_pi();

// |b|^beta for b > 0. Half-integer exponents avoid the general pow.
Wide wide_pow(const Wide& b, double beta);

std::string wide_to_string(const Wide& x);
Wide wide_from_string(const std::string& s);

// Dense row-major square matrix in quad precision.
struct WideMatrix {
    int n = 0;
    std::vector<Wide> a;

    WideMatrix() = default;
    explicit WideMatrix(int size) : n(size), a(static_cast<size_t>(size) * size, Wide(0)) {}
    Wide& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const Wide& operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

// Determinant by row-pivoted elimination.
Wide determinant(WideMatrix m);

// Solves m x = rhs; throws NumericalError when a pivot vanishes.
std::vector<Wide> solve(WideMatrix m, std::vector<Wide> rhs);

}  // namespace abel
