#pragma once

#include <utility>

#include "cmq/mpnum.hpp"

namespace cmq {

struct RiemannMatrix {
    CMatrix tau;  // 3x3
    prec_t prec = 0;

    RiemannMatrix() = default;
    RiemannMatrix(CMatrix t, prec_t p) : tau(std::move(t)), prec(p) {}
    const BigComplex& operator()(int i, int j) const { return tau(i, j); }
};

// 6x6 integer matrix with blocks (A B / C D).
using SymplecticMatrix = ZMatrix;

struct PolarizedLattice {
    CMatrix gens;  // 3x6, one lattice generator per column
    ZMatrix gram;  // 6x6 alternating
};

enum class ReductionVariant { minkowski, lll };

// Omega_3 = (0 I / -I 0)
ZMatrix omega3();
bool is_symplectic(const ZMatrix& m);
SymplecticMatrix symplectic_inverse(const SymplecticMatrix& m);
ZMatrix zmul(const ZMatrix& a, const ZMatrix& b);
// The symplectic matrix acting as tau -> U^T tau U.
SymplecticMatrix symplectic_from_unimodular(const ZMatrix& u);

// Throws NotPositiveDefinite / BadInput when the invariants fail.
void check_riemann_matrix(const RiemannMatrix& t);
bool is_positive_definite(const RMatrix& y);

RiemannMatrix symplectic_act(const SymplecticMatrix& m, const RiemannMatrix& tau);

struct FormReduction {
    RMatrix y;  // U^T Y U
    ZMatrix u;  // unimodular
};

FormReduction lll_reduce_imag(const RMatrix& y);
FormReduction minkowski_reduce(const RMatrix& y);
// Conditions (a) over primitive v with |v|_inf <= 3 and (b), with relative slack.
bool is_minkowski_reduced(const RMatrix& y, double slack = 1e-20);
bool is_lll_reduced(const RMatrix& y, double delta = 0.99, double slack = 1e-20);
// Lower bound c with n^T Y n >= c n^T n for Minkowski-reduced Y.
BigFloat minkowski_constant(const RMatrix& y);

struct SiegelReduction {
    RiemannMatrix tau;
    SymplecticMatrix m;  // tau = m(input)
};

SiegelReduction siegel_reduce(const RiemannMatrix& tau, ReductionVariant variant);

// exact, by fraction-free elimination
mpz_class zdeterminant(ZMatrix a);

ZMatrix symplectic_basis(const ZMatrix& gram);
RiemannMatrix period_matrix(const PolarizedLattice& lat, prec_t prec);

}  // namespace cmq
