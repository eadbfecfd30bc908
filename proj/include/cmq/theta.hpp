#pragma once

#include <array>
#include <vector>

#include "cmq/siegel.hpp"

namespace cmq {

// Characteristic halves are stored doubled: entries 0 or 1 mean 0 or 1/2.
struct ThetaChar {
    std::array<int, 3> a2{}, b2{};
};

int theta_index(const ThetaChar& c);
ThetaChar index_to_char(int i);
bool is_even_char(int i);

struct ThetaVector {
    std::vector<BigComplex> values;  // 64 entries
    RiemannMatrix at_tau;
    prec_t prec = 0;

    const BigComplex& operator[](int i) const { return values[std::size_t(i)]; }
};

using Fundamentals = std::array<BigComplex, 8>;

// Raises NotReduced when Y fails the Minkowski certificates.
long truncation_bound(const RMatrix& y, prec_t p_bits);

// theta[0;b](0, tau) for the 8 b, to 2^-p_bits absolute, by the cube sum.
Fundamentals theta_naive_fundamental(const RiemannMatrix& tau, prec_t p_bits);

// The same sum over the cube |n_i| <= bound, whatever the bound.
Fundamentals theta_box_fundamental(const RiemannMatrix& tau, long bound, prec_t p_bits);

// All 64 theta constants by direct summation over shifted lattices.  Works for
// any tau in the upper half space (the box comes from the smallest eigenvalue
// of Im tau), so it serves for low-precision hints and as a test oracle.
std::vector<BigComplex> theta_direct_all(const RiemannMatrix& tau, prec_t p_bits);
Fundamentals theta_direct_fundamental(const RiemannMatrix& tau, prec_t p_bits);

// Squares of all 64 theta constants at 2*tau from the fundamentals at tau.
std::vector<BigComplex> duplication_all_squares(const Fundamentals& fund);

// Square roots matched against a direct evaluation at hint_digits decimal digits.
ThetaVector resolve_square_roots(const std::vector<BigComplex>& squares, const RiemannMatrix& tau,
                                 long hint_digits = 64);
ThetaVector resolve_square_roots(const std::vector<BigComplex>& squares, const RiemannMatrix& tau,
                                 const std::vector<BigComplex>& hints);

Fundamentals borchardt_step(const Fundamentals& t, const Fundamentals& roots);

// Square-root hints for a sign-tracked Borchardt mean: hints[k][b] approximates
// theta_b(2^k T)/theta_0(2^k T) for the matrix T the input belongs to.
using BorchardtHints = std::vector<Fundamentals>;

BigComplex borchardt_mean_good(const Fundamentals& t, prec_t prec);
BigComplex borchardt_mean_tracked(const Fundamentals& t, const BorchardtHints& hints, prec_t prec);
BorchardtHints borchardt_hints(const RiemannMatrix& t, long hint_digits = 64);

// Hints needed by F_eval, computed once from a low-precision tau.
struct FHints {
    RiemannMatrix tau;
    BorchardtHints at_tau;              // for t0
    Fundamentals fund;  // theta_b(tau)/theta_0(tau)
    std::array<BorchardtHints, 7> lists;  // for the seven means at 2 tau
};

FHints make_fhints(const RiemannMatrix& tau, long hint_digits = 64);
// The symplectic matrices relating the seven index lists to 2 tau.
std::array<SymplecticMatrix, 7> fmap_matrices();
extern const std::array<std::array<int, 8>, 7> kFLists;

using FVector = std::array<BigComplex, 7>;

FVector F_eval(const std::array<BigComplex, 7>& q, const FHints& hints, prec_t prec);
// The value F takes at the true quotients of tau.
FVector F_target(const RiemannMatrix& tau, prec_t prec);

ThetaVector theta_naive(const RiemannMatrix& tau, prec_t p_bits);
ThetaVector theta_fast(const RiemannMatrix& tau, prec_t p_bits);

}  // namespace cmq
