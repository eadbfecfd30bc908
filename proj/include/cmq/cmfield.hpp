#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cmq/siegel.hpp"

namespace cmq {

struct SexticCMField {
    int case_id = 0;
    long d_k = 0;
    std::vector<mpz_class> p_F;  // constant term first
    std::vector<mpz_class> p_K;
    mpz_class d_K;
    int h_star = 0;
    QMatrix basis;                      // row j: b_j on 1, a, ..., a^5
    std::array<mpq_class, 6> sqrt_d_k;  // on the power basis
    std::vector<std::array<mpq_class, 6>> xi_candidates;  // reference elements, integral-basis coordinates
};

// Rows of fields.json joined with bases.json.
SexticCMField load_field(int case_id);
std::vector<int> bundled_field_cases();

// roots[2i] in the upper half plane, pairs by increasing real part, roots[2i+1] = conj(roots[2i]).
// BadInput on a real root.
std::vector<BigComplex> embeddings(const SexticCMField& k, prec_t prec);

using CMType = std::array<int, 3>;  // indices into embeddings()
struct PolarizationElement {
    std::array<mpq_class, 6> coords;  // over the integral basis
};

// E[i][j] = Tr(xi b_i conj(b_j)); NotIntegral if a rounding residual exceeds 1e-20.
ZMatrix riemann_form(const SexticCMField& k, const PolarizationElement& xi, prec_t prec);

struct Polarization {
    PolarizationElement xi;
    CMType phi;
    ZMatrix e;
    bool primitive = false;  // Phi not induced from the imaginary quadratic subfield
};

// Totally imaginary elements of the trace dual with det E = 1, from integer
// combinations (entries up to search_radius) of a basis of that lattice.
std::vector<Polarization> find_polarization(const SexticCMField& k, int search_radius, prec_t prec = 256);

// E is negated when that is what makes Im(tau) positive.
PolarizedLattice cm_lattice(const SexticCMField& k, const PolarizationElement& xi, const CMType& phi, prec_t prec);
// The first primitive polarization's period matrix.
RiemannMatrix cm_period_matrix(const SexticCMField& k, prec_t prec, int search_radius = 3);

struct ReductionType {
    int n = 0;  // number of primes of K above p
    int d = 0;
    bool simple = false;
    bool supersingular = false;
    std::string algebra;
};

ReductionType classify_reduction(const SexticCMField& k, const mpz_class& p);
// Number of irreducible factors of f modulo a prime p not dividing disc(f).
int factor_count_mod_p(const std::vector<mpz_class>& f, const mpz_class& p);
mpz_class poly_discriminant(const std::vector<mpz_class>& f);

}  // namespace cmq
