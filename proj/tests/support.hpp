#pragma once

#include <random>

#include "cmq/dixmier_ohno.hpp"
#include "cmq/siegel.hpp"

namespace cmq::test {

// fixed seeds so failures reproduce
inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }
inline double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline RationalQuartic random_quartic(long bound = 9) {
    RationalQuartic q;
    for (auto& c : q) c = uniform(-bound, bound);
    return q;
}

inline BigComplex random_complex(prec_t p, double scale = 1.0) {
    return BigComplex(BigFloat(uniform_real(-scale, scale), p), BigFloat(uniform_real(-scale, scale), p));
}

// random point of the Siegel upper half space, then reduced
inline RiemannMatrix random_reduced_tau(prec_t p) {
    CMatrix t(3, 3);
    double a[3][3];
    for (auto& row : a)
        for (auto& v : row) v = uniform_real(-1, 1);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) {
            double y = i == j ? 0.6 : 0.0;
            for (std::size_t k = 0; k < 3; ++k) y += a[k][i] * a[k][j];
            t(i, j) = t(j, i) = BigComplex(BigFloat(uniform_real(-0.5, 0.5), p), BigFloat(y, p));
        }
    return siegel_reduce(RiemannMatrix(t, p), ReductionVariant::minkowski).tau;
}

inline bool equal(const ZMatrix& a, const ZMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

inline bool close(const BigComplex& a, const BigComplex& b, const BigFloat& tol) { return abs(a - b) < tol; }

}  // namespace cmq::test
