#include "abel/wide.hpp"

#include "abel/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <sstream>
#include <utility>

namespace abel {

Wide wide_pi()
{
    static const Wide pi = boost::math::constants::pi<Wide>();
    return pi;
}

Wide wide_pow(const Wide& b, double beta)
{
    double twice = 2.0 * beta;
    if (twice == std::floor(twice) && std::fabs(twice) < 64.0) {
        int h = static_cast<int>(twice);
        Wide r = 1;
        int whole = h / 2;
        if (h % 2 != 0) {
            r = sqrt(b);
            if (h < 0) {
                r = 1 / r;
                whole = (h + 1) / 2;
            }
        }
        Wide base = whole >= 0 ? b : 1 / b;
        for (int k = whole >= 0 ? whole : -whole; k > 0; --k) r *= base;
        return r;
    }
    return pow(b, Wide(beta));
}

std::string wide_to_string(const Wide& x)
{
    std::ostringstream out;
    out << std::setprecision(36) << std::scientific << x;
    return out.str();
}

Wide wide_from_string(const std::string& s)
{
    return Wide(s);
}

Wide determinant(WideMatrix m)
{
    const int n = m.n;
    Wide det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (abs(m(r, c)) > abs(m(piv, c))) piv = r;
        if (m(piv, c) == 0) return 0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (int r = c + 1; r < n; ++r) {
            Wide f = m(r, c) / m(c, c);
            if (f == 0) continue;
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

std::vector<Wide> solve(WideMatrix m, std::vector<Wide> rhs)
{
    const int n = m.n;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (abs(m(r, c)) > abs(m(piv, c))) piv = r;
        if (m(piv, c) == 0) throw NumericalError("singular linear system");
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            std::swap(rhs[piv], rhs[c]);
        }
        for (int r = c + 1; r < n; ++r) {
            Wide f = m(r, c) / m(c, c);
            if (f == 0) continue;
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
            rhs[r] -= f * rhs[c];
        }
    }
    std::vector<Wide> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Wide s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

}  // namespace abel
