#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "cmq/arith.hpp"
#include "cmq/cmfield.hpp"
#include "cmq/pipeline.hpp"
#include "support.hpp"

using namespace cmq;
using namespace cmq::test;

namespace {

constexpr prec_t kP = 256;

const SexticCMField& field(int c) {
    static std::map<int, SexticCMField> cache;
    auto it = cache.find(c);
    if (it == cache.end()) it = cache.emplace(c, load_field(c)).first;
    return it->second;
}

std::vector<mpq_class> as_rational(const std::vector<mpz_class>& f) { return {f.begin(), f.end()}; }

// f mod p reduced to [0, p), constant term first; trailing zeros trimmed
using Poly = std::vector<long>;

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly rem(Poly a, const Poly& b, long p) {
    long inv = 1;
    for (long e = p - 2, base = b.back(); e > 0; e >>= 1, base = base * base % p)
        if (e & 1) inv = inv * base % p;
    while (a.size() >= b.size()) {
        long c = a.back() * inv % p;
        std::size_t s = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = ((a[s + i] - c * b[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

// irreducible over F_p iff no monic factor of degree 1..3 divides it
bool irreducible_mod(const std::vector<mpz_class>& f, long p) {
    Poly g;
    for (const auto& c : f) g.push_back(mpz_class(((c % p) + p) % p).get_si());
    trim(g);
    for (int d = 1; d <= 3; ++d) {
        long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long n = 0; n < count; ++n) {
            Poly h(std::size_t(d + 1));
            long m = n;
            for (int i = 0; i < d; ++i, m /= p) h[std::size_t(i)] = m % p;
            h[std::size_t(d)] = 1;
            if (rem(g, h, p).empty()) return false;
        }
    }
    return true;
}

long roots_mod(const std::vector<mpz_class>& f, long p) {
    long r = 0;
    for (long x = 0; x < p; ++x) {
        mpz_class v = 0;
        for (std::size_t i = f.size(); i-- > 0;) v = (v * x + f[i]) % p;
        if (v == 0) ++r;
    }
    return r;
}

// symmetric positive definite iff every elimination pivot is positive
bool positive_pivots(RMatrix a) {
    std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k).sign() <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            BigFloat f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return true;
}

}  // namespace

TEST_CASE("case 15 field data") {
    const SexticCMField& k = field(15);
    CHECK(k.d_k == -19);
    REQUIRE(k.p_F.size() == 4);
    CHECK(k.p_F[0] == 1);
    CHECK(k.p_F[1] == -5);
    CHECK(k.p_F[2] == 2);
    CHECK(k.p_F[3] == 1);
    mpz_class d = 1;
    for (int i = 0; i < 5; ++i) d *= 19;
    CHECK(abs(k.d_K) == d);
    CHECK(k.h_star == 1);
}

TEST_CASE("every field: conjugate pairs, totally real cubic, basis of full rank") {
    for (int c : bundled_field_cases()) {
        CAPTURE(c);
        const SexticCMField& k = field(c);
        std::vector<BigComplex> r = embeddings(k, kP);
        REQUIRE(r.size() == 6);
        for (std::size_t i = 0; i < 6; i += 2) {
            CHECK(abs(r[i].im) > BigFloat(1e-10, kP));
            CHECK(abs(r[i + 1] - r[i].conj()) < pow2(-long(kP) + 10, kP));
        }
        for (const BigComplex& z : poly_roots(as_rational(k.p_F), kP)) CHECK(abs(z.im) < pow2(-long(kP) / 2, kP));
        CHECK(sgn(poly_discriminant(k.p_K)) != 0);
        // doubling the precision moves the roots very little
        std::vector<BigComplex> r2 = embeddings(k, 2 * kP);
        for (std::size_t i = 0; i < 6; ++i) CHECK(abs(r2[i] - r[i]) < pow2(-long(kP) + 10, kP));
    }
}

TEST_CASE("a real root is rejected") {
    SexticCMField k = field(15);
    // x^6 - 2 has two real roots
    k.p_K = {-2, 0, 0, 0, 0, 0, 1};
    CHECK_THROWS_AS(embeddings(k, kP), BadInput);
}

TEST_CASE("Riemann forms: zero, sign, linearity") {
    const SexticCMField& k = field(15);
    PolarizationElement zero;
    for (auto& c : zero.coords) c = 0;
    ZMatrix e0 = riemann_form(k, zero, kP);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(e0(i, j) == 0);

    std::vector<Polarization> found = find_polarization(k, 3, kP);
    REQUIRE_FALSE(found.empty());
    PolarizationElement neg = found[0].xi;
    for (auto& c : neg.coords) c = -c;
    ZMatrix en = riemann_form(k, neg, kP);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(en(i, j) == -found[0].e(i, j));
}

TEST_CASE("found polarizations are principal and positive") {
    for (int c : {15, 2, 10, 19}) {
        CAPTURE(c);
        const SexticCMField& k = field(c);
        std::vector<Polarization> found = find_polarization(k, 3, kP);
        REQUIRE_FALSE(found.empty());
        int checked = 0;
        for (const Polarization& pol : found) {
            if (++checked > 4) break;
            const ZMatrix& e = pol.e;
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 6; ++j) CHECK(e(i, j) == -e(j, i));
            CHECK(zdeterminant(e) == 1);
            // Phi takes the embeddings where xi has positive imaginary part, one from each pair
            std::set<int> pairs;
            for (int i : pol.phi) pairs.insert(i / 2);
            CHECK(pairs.size() == 3);

            // E(u, iu) > 0: the real symmetric form S(x, y) = E(x, J y), J the complex structure
            PolarizedLattice lat = cm_lattice(k, pol.xi, pol.phi, kP);
            RMatrix l(6, 6, BigFloat(kP));
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t j = 0; j < 6; ++j) {
                    l(r, j) = lat.gens(r, j).re;
                    l(r + 3, j) = lat.gens(r, j).im;
                }
            // J in lattice coordinates is L^-1 (multiplication by i) L, solved column by column
            RMatrix il(6, 6, BigFloat(kP));
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t j = 0; j < 6; ++j) {
                    il(r, j) = -l(r + 3, j);
                    il(r + 3, j) = l(r, j);
                }
            RMatrix zero(6, 6, BigFloat(kP));
            RMatrix jm = real_part(solve(to_complex(l, zero), to_complex(il, zero)));
            RMatrix s(6, 6, BigFloat(kP));
            for (std::size_t a = 0; a < 6; ++a)
                for (std::size_t b = 0; b < 6; ++b)
                    for (std::size_t m = 0; m < 6; ++m) s(a, b) += BigFloat(e(a, m), kP) * jm(m, b);
            CHECK(norm_inf(s - s.transpose()) < pow2(-long(kP) / 2, kP));
            CHECK(positive_pivots(s));
            RiemannMatrix t = period_matrix(lat, kP);
            CHECK_NOTHROW(check_riemann_matrix(t));
        }
    }
}

TEST_CASE("negating xi conjugates the CM type") {
    const SexticCMField& k = field(15);
    std::vector<Polarization> found = find_polarization(k, 3, kP);
    REQUIRE_FALSE(found.empty());
    std::set<std::vector<int>> types;
    for (const auto& pol : found) {
        std::vector<int> v(pol.phi.begin(), pol.phi.end());
        std::sort(v.begin(), v.end());
        types.insert(v);
    }
    for (const auto& pol : found) {
        std::vector<int> conj;
        for (int i : pol.phi) conj.push_back(i ^ 1);
        std::sort(conj.begin(), conj.end());
        // -xi is found too, with the conjugate type
        CHECK(types.count(conj) == 1);
    }
}

TEST_CASE("relative class number 4 is unsupported") {
    CHECK_THROWS_AS(find_polarization(field(7), 3, kP), UnsupportedClassNumber);
    CHECK_THROWS_AS(cm_period_matrix(field(7), kP), UnsupportedClassNumber);
}

TEST_CASE("reordering the CM type gives an equivalent curve") {
    const SexticCMField& k = field(15);
    Polarization pol = find_polarization(k, 3, kP)[0];
    PipelineOptions opt;
    opt.digits = 120;
    auto run = [&](const CMType& phi) {
        RiemannMatrix t = period_matrix(cm_lattice(k, pol.xi, phi, digits_to_bits(160)), digits_to_bits(160));
        return run_pipeline(t, opt);
    };
    PipelineResult base = run(pol.phi);
    CMType rotated{pol.phi[1], pol.phi[2], pol.phi[0]};
    PipelineResult other = run(rotated);
    BigFloat tol = pow2(-long(base.prec) / 2, base.prec);
    CHECK(weighted_projective_equal(base.invariants, other.invariants, tol));
}

TEST_CASE("reduction types of the case 9 field") {
    const SexticCMField& k = field(9);
    for (long p : {233L, 857L}) {
        ReductionType t = classify_reduction(k, p);
        CHECK(t.n == 6);
        CHECK(t.d == 1);
        CHECK(t.simple);
        CHECK_FALSE(t.supersingular);
        CHECK(t.algebra == "K");
        CHECK(roots_mod(k.p_K, p) == 6);
    }
    mpz_class disc = poly_discriminant(k.p_K);
    long inert = 0;
    for (long p = 2; p < 100 && inert == 0; ++p) {
        if (!is_probable_prime(p) || disc % p == 0) continue;
        if (irreducible_mod(k.p_K, p)) inert = p;
    }
    REQUIRE(inert != 0);
    ReductionType t = classify_reduction(k, inert);
    CHECK(t.n == 1);
    CHECK(t.d == 3);
    CHECK(t.supersingular);
    CHECK(t.algebra == "M3(B_{p,inf})");
}

TEST_CASE("n divides 6 and n = 2 gives a division algebra") {
    bool saw_two = false;
    for (int c : bundled_field_cases()) {
        const SexticCMField& k = field(c);
        mpz_class disc = poly_discriminant(k.p_K);
        for (long p = 2; p < 300; ++p) {
            if (!is_probable_prime(p) || disc % p == 0) continue;
            ReductionType t = classify_reduction(k, p);
            CHECK(6 % t.n == 0);
            // the count agrees with roots when the primes split completely
            if (t.n == 6) CHECK(roots_mod(k.p_K, p) == 6);
            if (t.n == 2) {
                saw_two = true;
                CHECK(t.d == 1);
                CHECK(t.simple);
                CHECK(t.algebra.find("division algebra") != std::string::npos);
            }
        }
    }
    CHECK(saw_two);
}

TEST_CASE("ramified and composite primes are rejected") {
    const SexticCMField& k = field(15);
    CHECK_THROWS_AS(classify_reduction(k, 19), Ramified);
    CHECK_THROWS_AS(classify_reduction(k, 4), NotPrime);
    CHECK_THROWS_AS(classify_reduction(k, 1), NotPrime);
}
