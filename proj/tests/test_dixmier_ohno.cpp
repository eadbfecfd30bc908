#include <doctest.h>

#include "cmq/arith.hpp"
#include "cmq/pipeline.hpp"
#include "support.hpp"

using namespace cmq;
using namespace cmq::test;

namespace {

using Mat3 = std::array<std::array<long, 3>, 3>;

mpq_class power(const mpq_class& x, int e) {
    mpq_class r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

long det(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// random element of SL3(Z) with entries in [-3, 3]
Mat3 random_unimodular() {
    for (;;) {
        Mat3 m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        for (int s = 0; s < 4; ++s) {
            int i = int(uniform(0, 2)), j = (i + int(uniform(1, 2))) % 3;
            long f = uniform(-2, 2);
            for (int c = 0; c < 3; ++c) m[std::size_t(i)][std::size_t(c)] += f * m[std::size_t(j)][std::size_t(c)];
        }
        if (uniform(0, 1)) std::swap(m[0], m[1]), m[2] = {-m[2][0], -m[2][1], -m[2][2]};
        bool small = true;
        for (auto& r : m)
            for (long v : r) small = small && v >= -3 && v <= 3;
        if (small && det(m) == 1) return m;
    }
}

const RationalQuartic& curve(int c) {
    static std::map<int, RationalQuartic> cache;
    auto it = cache.find(c);
    if (it == cache.end()) it = cache.emplace(c, load_case(c).quartic).first;
    return it->second;
}

RationalQuartic monomial(int n) {
    RationalQuartic q;
    for (auto& c : q) c = 0;
    q[std::size_t(n)] = 1;
    return q;
}

}  // namespace

TEST_CASE("smooth and singular quartics") {
    RationalQuartic fermat = monomial(0);
    fermat[10] = 1;
    fermat[14] = 1;
    CHECK(sgn(exact_DO(fermat)[12]) != 0);
    CHECK(sgn(exact_DO(monomial(0))[12]) == 0);
    CHECK_THROWS_AS(discriminant_report(monomial(0)), SingularCurve);
    // (x^2 + y^2 - z^2)(x^2 - 2 y^2 + 3 z^2): two conics, nodes where they meet
    RationalQuartic two_conics;
    for (auto& c : two_conics) c = 0;
    two_conics[0] = 1;        // x4
    two_conics[3] = -1;       // x2y2
    two_conics[5] = 2;        // x2z2
    two_conics[10] = -2;      // y4
    two_conics[12] = 5;       // y2z2
    two_conics[14] = -3;      // z4
    CHECK(sgn(exact_DO(two_conics)[12]) == 0);
}

TEST_CASE("case 15: normalized and minimal invariants") {
    RationalDO t = exact_DO(curve(15));
    RationalDO n = do_normalize(t);
    CHECK(n[0] == 1);
    CHECK(n[1] == mpq_class(3967, 609408));
    CHECK(n[12] == mpq_class("346304226226660371/1980388294678257795596288"));
    MinimalDO m = minimal_representative(t);
    CHECK(m[0] == 2208);
    CHECK(m[1] == 31736);
    CHECK(m[2] == mpz_class(8 * 3 * 5 * 41 * 173) * 19309);
    mpz_class i27 = 32;
    for (int i = 0; i < 27; ++i) i27 *= 3;
    for (int i = 0; i < 7; ++i) i27 *= 19;
    CHECK(m[12] == i27);
}

TEST_CASE("discriminant reports of published curves") {
    auto d15 = discriminant_report(curve(15));
    CHECK(d15.sign == 1);
    REQUIRE(d15.primes.size() == 1);
    CHECK(d15.primes[0] == std::pair<mpz_class, int>(19, 7));
    CHECK(d15.composite.empty());

    auto d19 = discriminant_report(curve(19));
    REQUIRE(d19.primes.size() == 2);
    CHECK(d19.primes[0] == std::pair<mpz_class, int>(11, 14));
    CHECK(d19.primes[1] == std::pair<mpz_class, int>(43, 7));

    auto d10 = discriminant_report(curve(10));
    CHECK(d10.sign == -1);
    REQUIRE(d10.primes.size() == 2);
    CHECK(d10.primes[0] == std::pair<mpz_class, int>(41, 14));
    CHECK(d10.primes[1] == std::pair<mpz_class, int>(71, 14));
}

TEST_CASE("homogeneity") {
    for (int k = 0; k < 100; ++k) {
        RationalQuartic q = random_quartic();
        mpq_class lam(uniform(-5, 5), uniform(1, 4));
        if (sgn(lam) == 0) lam = 3;
        lam.canonicalize();
        RationalQuartic s = q;
        for (auto& c : s) c *= lam;
        RationalDO a = exact_DO(q), b = exact_DO(s);
        for (std::size_t i = 0; i < 13; ++i) CHECK(b[i] == power(lam, kDOWeights[i]) * a[i]);
    }
}

TEST_CASE("SL3(Z) invariance") {
    for (int k = 0; k < 100; ++k) {
        RationalQuartic q = random_quartic(5);
        Mat3 m = random_unimodular();
        RationalDO a = exact_DO(q), b = exact_DO(substitute(q, m));
        for (std::size_t i = 0; i < 13; ++i) CHECK(a[i] == b[i]);
    }
    // det -1 enters as (-1)^(4w/3), always even
    RationalQuartic q = curve(15);
    Mat3 swap{{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}};
    RationalDO a = exact_DO(q), b = exact_DO(substitute(q, swap));
    for (std::size_t i = 0; i < 13; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("scaling x by 1/p and the form by p divides weight 3n by p^n") {
    for (int k = 0; k < 100; ++k) {
        RationalQuartic q = random_quartic();
        long p = std::array<long, 4>{2, 3, 5, 7}[std::size_t(k % 4)];
        RationalQuartic s = q;
        for (int n = 0; n < 15; ++n) {
            int i = Form<mpq_class>::exponents(4, n)[0];
            // p * (x/p)^i
            s[std::size_t(n)] *= power(mpq_class(p), 1) / power(mpq_class(p), i);
        }
        RationalDO a = exact_DO(q), b = exact_DO(s);
        for (std::size_t i = 0; i < 13; ++i) CHECK(b[i] == a[i] / power(mpq_class(p), kDOWeights[i] / 3));
    }
}

TEST_CASE("numeric invariants agree with exact ones") {
    prec_t p = 512;
    for (int k = 0; k < 100; ++k) {
        RationalQuartic q = k == 0 ? curve(15) : random_quartic();
        RationalDO a = exact_DO(q);
        ComplexDO b = numeric_DO(to_complex(q, p));
        // size of the coefficients to the weight bounds the rounding of each term
        mpq_class big = 1;
        for (auto& c : q) big = std::max(big, mpq_class(abs(c)));
        for (std::size_t i = 0; i < 13; ++i) {
            BigFloat scale = BigFloat(power(big * 16, kDOWeights[i]), p);
            BigFloat err = abs(b[i] - BigComplex(a[i], p));
            CHECK(err < pow2(-long(p) + 40, p) * scale);
        }
    }
}

TEST_CASE("normalization and weighted projective equality") {
    RationalDO t = exact_DO(curve(15));
    mpq_class lam(-3, 7);
    RationalDO s = t;
    for (std::size_t i = 0; i < 13; ++i) s[i] *= power(lam, kDOWeights[i] / 3);
    RationalDO a = do_normalize(t), b = do_normalize(s);
    for (std::size_t i = 0; i < 13; ++i) CHECK(a[i] == b[i]);
    CHECK(weighted_projective_equal(t, s));
    CHECK_FALSE(weighted_projective_equal(t, exact_DO(curve(19))));

    prec_t p = 400;
    ComplexDO tc, sc;
    for (std::size_t i = 0; i < 13; ++i) {
        tc[i] = BigComplex(t[i], p);
        sc[i] = BigComplex(s[i], p);
    }
    CHECK(weighted_projective_equal(tc, sc, pow2(-300, p)));
    sc[4] = sc[4] * BigComplex(BigFloat(1L, p) + pow2(-100, p));
    CHECK_FALSE(weighted_projective_equal(tc, sc, pow2(-300, p)));

    RationalDO z = t;
    z[0] = 0;
    CHECK_THROWS_AS(do_normalize(z), LeadingInvariantZero);
    // fallback pivot when I3 vanishes
    RationalDO zs = z;
    for (std::size_t i = 0; i < 13; ++i) zs[i] *= power(lam, kDOWeights[i] / 3);
    CHECK(weighted_projective_equal(z, zs));
}

TEST_CASE("rational recognition") {
    prec_t p = digits_to_bits(200);
    CHECK(rational_recognize(BigFloat(mpq_class(1, 3), p)) == mpq_class(1, 3));
    CHECK(rational_recognize(BigFloat(mpq_class(3967, 609408), digits_to_bits(300))) == mpq_class(3967, 609408));
    CHECK(rational_recognize(BigFloat(mpq_class(-22, 7), p)) == mpq_class(-22, 7));
    CHECK_THROWS_AS(rational_recognize(BigFloat::pi(digits_to_bits(50)), 100), Unstable);
    // a denominator beyond the bound
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, 30);
    CHECK_THROWS_AS(rational_recognize(BigFloat(mpq_class(1, den + 1), p), 20), Unstable);
}

TEST_CASE("minimal representatives") {
    MinimalDO m = minimal_representative(exact_DO(curve(15)));
    RationalDO mq;
    for (std::size_t i = 0; i < 13; ++i) mq[i] = m[i];
    MinimalDO again = minimal_representative(mq);
    for (std::size_t i = 0; i < 13; ++i) CHECK(again[i] == m[i]);

    for (int k = 0; k < 10; ++k) {
        RationalQuartic q = random_quartic(30);
        RationalDO t = exact_DO(q);
        if (sgn(t[0]) == 0) continue;
        MinimalDO r = minimal_representative(t);
        RationalDO rq;
        for (std::size_t i = 0; i < 13; ++i) rq[i] = r[i];
        CHECK(weighted_projective_equal(t, rq));
        // no prime up to 10^6 divides every entry with its weight
        mpz_class g = abs(r[0]);
        for (unsigned long p = 2; p <= 1000000 && p <= g; ++p) {
            if (!mpz_divisible_ui_p(g.get_mpz_t(), p) || !is_probable_prime(mpz_class(p))) continue;
            bool all = true;
            for (std::size_t i = 0; i < 13 && all; ++i)
                all = sgn(r[i]) == 0 || valuation(r[i], mpz_class(p)) >= kDOWeights[i] / 3;
            CHECK_FALSE(all);
        }
    }
}

TEST_CASE("quartic parsing") {
    std::vector<std::string> s(15, "0");
    s[0] = "3/4";
    s[14] = "-2";
    RationalQuartic q = parse_quartic(s);
    CHECK(q[0] == mpq_class(3, 4));
    CHECK(q[14] == -2);
    s.pop_back();
    CHECK_THROWS_AS(parse_quartic(s), BadInput);
}
