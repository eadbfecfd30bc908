// One [PASS]/[FAIL] line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "cmq/arith.hpp"
#include "cmq/pipeline.hpp"
#include "support.hpp"

using namespace cmq;
using namespace cmq::test;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void criterion(const char* name, const std::function<Outcome()>& f) {
    Outcome o{false, ""};
    auto t0 = Clock::now();
    try {
        o = f();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.ok) ++failures;
    std::printf("[%s] %s  (%.1f s) %s\n", o.ok ? "PASS" : "FAIL", name, s, o.detail.c_str());
    std::fflush(stdout);
}

mpz_class pw(long b, int e) {
    mpz_class r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

mpq_class qpow(const mpq_class& x, int e) {
    mpq_class r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

RiemannMatrix scaled(const RiemannMatrix& t, long e) {
    CMatrix m = t.tau;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j).mul_2si(e);
    return RiemannMatrix(m, t.prec);
}

ZMatrix random_symplectic(int steps) {
    ZMatrix m = zidentity(6);
    for (int s = 0; s < steps; ++s) {
        ZMatrix g = zidentity(6);
        switch (uniform(0, 2)) {
            case 0:
                for (std::size_t i = 0; i < 3; ++i)
                    for (std::size_t j = i; j < 3; ++j) g(i, j + 3) = g(j, i + 3) = uniform(-2, 2);
                break;
            case 1: {
                ZMatrix u = zidentity(3);
                std::size_t i = std::size_t(uniform(0, 2)), j = (i + std::size_t(uniform(1, 2))) % 3;
                u(i, j) = uniform(-2, 2);
                g = symplectic_from_unimodular(u);
                break;
            }
            default: g = omega3();
        }
        m = zmul(g, m);
    }
    return m;
}

std::string factors(const std::vector<std::pair<mpz_class, int>>& f) {
    std::string s;
    for (auto& [p, e] : f) s += (s.empty() ? "" : "*") + p.get_str() + "^" + std::to_string(e);
    return s;
}

// irreducible over F_p iff no monic polynomial of degree 1..3 divides it
bool irreducible_mod(const std::vector<mpz_class>& f, long p) {
    std::vector<long> g;
    for (const auto& c : f) g.push_back(mpz_class(((c % p) + p) % p).get_si());
    while (!g.empty() && g.back() == 0) g.pop_back();
    for (int d = 1; d <= 3; ++d) {
        long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long n = 0; n < count; ++n) {
            std::vector<long> h(std::size_t(d + 1)), r = g;
            long m = n;
            for (int i = 0; i < d; ++i, m /= p) h[std::size_t(i)] = m % p;
            h[std::size_t(d)] = 1;
            while (r.size() >= h.size()) {
                long c = r.back();
                std::size_t s = r.size() - h.size();
                for (std::size_t i = 0; i < h.size(); ++i) r[s + i] = ((r[s + i] - c * h[i]) % p + p) % p;
                while (!r.empty() && r.back() == 0) r.pop_back();
            }
            if (r.empty()) return false;
        }
    }
    return true;
}

const PipelineResult& case15_1000() {
    static PipelineResult r = [] {
        PipelineOptions opt;
        opt.digits = 1000;
        return run_pipeline(case_tau(15, digits_to_bits(1000) + 128), opt);
    }();
    return r;
}

}  // namespace

int main() {
    criterion("1 case-15 end to end at 1000 digits", [] {
        const PipelineResult& r = case15_1000();
        if (!r.minimal) return Outcome{false, "no minimal representative"};
        const MinimalDO& m = *r.minimal;
        mpz_class i27 = pw(2, 5) * pw(3, 27) * pw(19, 7);
        bool ok = r.recognized[1] == mpq_class(3967, 609408) && m[0] == 2208 && m[1] == 31736 && m[12] == i27;
        return Outcome{ok, "I6/I3^2 = " + r.recognized[1].get_str() + ", I3 = " + m[0].get_str() +
                               ", I6 = " + m[1].get_str() + ", I27 = " + factors(factor_integer(m[12]).primes)};
    });

    criterion("2 exact I27 of published curves", [] {
        struct Want {
            int id;
            int sign;
            std::vector<std::pair<mpz_class, int>> primes;
        };
        std::vector<Want> want{{15, 1, {{19, 7}}},
                               {19, 1, {{11, 14}, {43, 7}}},
                               {10, -1, {{41, 14}, {71, 14}}},
                               {2, 1, {{701, 14}}}};
        bool ok = true;
        std::string d;
        for (const Want& w : want) {
            DiscriminantReport r = discriminant_report(load_case(w.id).quartic);
            bool good = r.sign == w.sign && r.primes == w.primes && r.composite.empty();
            ok = ok && good;
            d += "X" + std::to_string(w.id) + ": " + (r.sign < 0 ? "-" : "+") + factors(r.primes) + (good ? "; " : " (MISMATCH); ");
        }
        return Outcome{ok, d};
    });

    criterion("3 weighted-projective match at 10^-900", [] {
        const PipelineResult& r = case15_1000();
        prec_t p = r.prec;
        RationalDO e = exact_DO(load_case(15).quartic);
        ComplexDO ec;
        for (std::size_t i = 0; i < 13; ++i) ec[i] = BigComplex(e[i], p);
        BigFloat tol = exp(BigFloat(-900L, p) * log(BigFloat(10L, p)));
        return Outcome{weighted_projective_equal(ec, r.invariants, tol), ""};
    });

    criterion("4 naive and fast thetas agree at 1660/3320/6640 bits", [] {
        RiemannMatrix red = siegel_reduce(case_tau(15, 6640 + 192), ReductionVariant::minkowski).tau;
        bool ok = true;
        std::string d;
        for (prec_t p : {1660UL, 3320UL, 6640UL}) {
            auto t0 = Clock::now();
            ThetaVector naive = theta_naive(red, p);
            double tn = std::chrono::duration<double>(Clock::now() - t0).count();
            t0 = Clock::now();
            ThetaVector fast = theta_fast(red, p);
            double tf = std::chrono::duration<double>(Clock::now() - t0).count();
            BigFloat worst(p);
            int odd_zero = 0, even_nonzero = 0;
            for (int i = 0; i < 64; ++i) {
                BigFloat diff = abs(naive[i] - fast[i]);
                if (diff > worst) worst = diff;
                if (!is_even_char(i) && fast[i].re.is_zero() && fast[i].im.is_zero()) ++odd_zero;
                if (is_even_char(i) && abs(fast[i]) > pow2(-long(p) / 2, p)) ++even_nonzero;
            }
            bool good = worst < pow2(-long(p) + 30, p) && odd_zero == 28 && even_nonzero == 36;
            if (p == 6640) good = good && tf <= 60.0;
            ok = ok && good;
            std::string diff = worst.is_zero() ? "0" : "2^" + std::to_string(worst.exponent());
            char buf[160];
            std::snprintf(buf, sizeof buf, "P=%lu: naive %.1fs fast %.1fs, diff %s, odd zero %d, even nonzero %d; ", p, tn,
                          tf, diff.c_str(), odd_zero, even_nonzero);
            d += buf;
        }
        return Outcome{ok, d};
    });

    criterion("5 certified truncation and the bound n^T Y n >= c n^T n", [] {
        int bad = 0;
        for (int k = 0; k < 50; ++k) {
            RiemannMatrix t = random_reduced_tau(512 + 64);
            long b = truncation_bound(imag_part(t.tau), 512);
            Fundamentals sb = theta_box_fundamental(t, b, 512 + 32), s2b = theta_box_fundamental(t, 2 * b, 512 + 32);
            for (std::size_t i = 0; i < 8; ++i)
                if (!(abs(sb[i] - s2b[i]) < pow2(-512, 512))) ++bad;
        }
        int bound_bad = 0, pairs = 0;
        prec_t p = 128;
        while (pairs < 10000) {
            RMatrix a(3, 3, BigFloat(p)), y(3, 3, BigFloat(p));
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) a(i, j) = BigFloat(uniform_real(-3, 3), p);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    for (std::size_t k = 0; k < 3; ++k) y(i, j) += a(k, i) * a(k, j);
            if (!is_positive_definite(y)) continue;
            RMatrix yr = minkowski_reduce(y).y;
            BigFloat c = minkowski_constant(yr);
            for (int s = 0; s < 100; ++s, ++pairs) {
                long n[3];
                do {
                    for (auto& v : n) v = uniform(-10, 10);
                } while (n[0] == 0 && n[1] == 0 && n[2] == 0);
                BigFloat q(p), nn(p);
                for (std::size_t i = 0; i < 3; ++i) {
                    nn += BigFloat(n[i] * n[i], p);
                    for (std::size_t j = 0; j < 3; ++j) q += yr(i, j) * BigFloat(n[i] * n[j], p);
                }
                if (q < c * nn) ++bound_bad;
            }
        }
        return Outcome{bad == 0 && bound_bad == 0,
                       std::to_string(bad) + " truncation failures, " + std::to_string(bound_bad) + " bound failures"};
    });

    criterion("6 reduction lands in the fundamental domain", [] {
        prec_t p = 512;
        int bad = 0;
        int cases[] = {15, 2, 19, 10};
        std::map<int, RiemannMatrix> taus;
        for (int c : cases) taus.emplace(c, case_tau(c, p + 128));
        for (int k = 0; k < 100; ++k) {
            RiemannMatrix in = symplectic_act(random_symplectic(int(uniform(1, 8))), taus.at(cases[k % 4]));
            SiegelReduction r = siegel_reduce(in, ReductionVariant::minkowski);
            RMatrix x = real_part(r.tau.tau), y = imag_part(r.tau.tau);
            bool ok = abs(r.tau(0, 0)) >= BigFloat(0.99, p) && y(0, 0) > BigFloat(0.85, p) && is_minkowski_reduced(y) &&
                      is_symplectic(r.m) && norm_inf(symplectic_act(r.m, in).tau - r.tau.tau) < pow2(-long(p) / 2, p);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) ok = ok && abs(x(i, j)) <= BigFloat(0.5, p) + pow2(-long(p) / 2, p);
            if (!ok) ++bad;
        }
        return Outcome{bad == 0, std::to_string(bad) + " of 100 outside"};
    });

    criterion("7 Aronhold lines bitangent below 10^-400", [] {
        const PipelineResult& r = case15_1000();
        BigFloat tol = exp(BigFloat(-400L, r.prec) * log(BigFloat(10L, r.prec)));
        bool ok = r.bitangency.size() == 7;
        long worst = -1000000;
        for (const BigFloat& d : r.bitangency) {
            ok = ok && d < tol;
            if (!d.is_zero()) worst = std::max(worst, d.exponent());
        }
        return Outcome{ok, "largest defect 2^" + std::to_string(worst)};
    });

    criterion("8 F at naive quotients reproduces the tau vector", [] {
        prec_t p = 1000;
        RiemannMatrix t = siegel_reduce(case_tau(15, p + 192), ReductionVariant::minkowski).tau;
        RiemannMatrix half = scaled(t, -1);
        Fundamentals f = theta_naive_fundamental(half, p + 32);
        std::array<BigComplex, 7> q;
        for (std::size_t b = 1; b < 8; ++b) q[b - 1] = f[b] * f[b] / (f[0] * f[0]);
        FVector got = F_eval(q, make_fhints(half), p), want = F_target(half, p);
        BigFloat worst(p);
        for (std::size_t i = 0; i < 7; ++i) worst = std::max(worst, abs(got[i] - want[i]));
        return Outcome{worst < pow2(-long(p) + 40, p), "max diff 2^" + std::to_string(worst.is_zero() ? -long(p) : worst.exponent())};
    });

    criterion("9 reduction types of the case-9 field", [] {
        SexticCMField k = load_field(9);
        bool ok = true;
        for (long p : {233L, 857L}) {
            ReductionType t = classify_reduction(k, p);
            ok = ok && t.n == 6 && t.d == 1 && t.simple && !t.supersingular && t.algebra == "K";
        }
        // first unramified prime where p_K stays irreducible
        mpz_class disc = poly_discriminant(k.p_K);
        long inert = 0;
        for (long p = 2; p < 100 && inert == 0; ++p) {
            if (!is_probable_prime(p) || disc % p == 0) continue;
            if (irreducible_mod(k.p_K, p)) inert = p;
        }
        if (inert == 0) return Outcome{false, "no inert prime below 100"};
        ReductionType t = classify_reduction(k, inert);
        ok = ok && t.n == 1 && t.d == 3 && t.supersingular;
        return Outcome{ok, "inert prime " + std::to_string(inert)};
    });

    criterion("10 property suites", [] {
        int bad = 0;
        // invariants: homogeneity, SL3(Z), p-scaling
        for (int k = 0; k < 100; ++k) {
            RationalQuartic q = random_quartic();
            RationalDO a = exact_DO(q);
            mpq_class lam(uniform(1, 5) * (uniform(0, 1) ? 1 : -1), uniform(1, 4));
            lam.canonicalize();
            RationalQuartic s = q;
            for (auto& c : s) c *= lam;
            RationalDO b = exact_DO(s);
            for (std::size_t i = 0; i < 13; ++i)
                if (b[i] != qpow(lam, kDOWeights[i]) * a[i]) ++bad;

            std::array<std::array<long, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
            for (int st = 0; st < 3; ++st) {
                std::size_t i = std::size_t(uniform(0, 2)), j = (i + std::size_t(uniform(1, 2))) % 3;
                long f = uniform(-1, 1);
                for (std::size_t c = 0; c < 3; ++c) m[i][c] += f * m[j][c];
            }
            RationalDO u = exact_DO(substitute(q, m));
            for (std::size_t i = 0; i < 13; ++i)
                if (u[i] != a[i]) ++bad;

            long p = std::array<long, 4>{2, 3, 5, 7}[std::size_t(k % 4)];
            RationalQuartic ps = q;
            for (int n = 0; n < 15; ++n) ps[std::size_t(n)] *= mpq_class(p) / qpow(p, Form<mpq_class>::exponents(4, n)[0]);
            RationalDO pd = exact_DO(ps);
            for (std::size_t i = 0; i < 13; ++i)
                if (pd[i] != a[i] / qpow(p, kDOWeights[i] / 3)) ++bad;
        }
        // Borchardt: B3(theta^2) = 1 and homogeneity; duplication
        prec_t p = 256;
        for (int k = 0; k < 100; ++k) {
            RiemannMatrix t = random_reduced_tau(p + 64);
            Fundamentals f = theta_naive_fundamental(t, p + 32), sq, sl;
            for (std::size_t b = 0; b < 8; ++b) sq[b] = f[b] * f[b];
            BorchardtHints h = borchardt_hints(t);
            BigComplex m = borchardt_mean_tracked(sq, h, p);
            if (!(abs(m - BigComplex(1L, p)) < pow2(-long(p) + 24, p))) ++bad;
            BigComplex lam = random_complex(p, 3.0);
            if (abs(lam) < BigFloat(0.1, p)) lam = BigComplex(1L, p);
            for (std::size_t b = 0; b < 8; ++b) sl[b] = sq[b] * lam;
            if (!(abs(borchardt_mean_tracked(sl, h, p) - lam * m) < pow2(-long(p) + 24, p) * abs(lam))) ++bad;

            auto dup = duplication_all_squares(theta_naive_fundamental(t, p));
            auto direct = theta_direct_all(scaled(t, 1), p);
            for (std::size_t i = 0; i < 64; ++i)
                if (!(abs(dup[i] - direct[i] * direct[i]) < pow2(-long(p) + 40, p))) ++bad;
        }
        return Outcome{bad == 0, std::to_string(bad) + " failures"};
    });

    return failures == 0 ? 0 : 1;
}
