#include "cmq/arith.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>

namespace cmq {

bool is_probable_prime(const mpz_class& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

int valuation(const mpz_class& n, const mpz_class& p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    mpz_class m = n;
    int v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

int valuation(const mpq_class& q, const mpz_class& p) { return valuation(q.get_num(), p) - valuation(q.get_den(), p); }

namespace {

using Clock = std::chrono::steady_clock;

// Brent's variant; returns 0 when the deadline passes.
mpz_class rho(const mpz_class& n, unsigned long c, Clock::time_point deadline) {
    mpz_class y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, m = 128;
    auto f = [&](mpz_class& v) {
        v = v * v + c;
        v %= n;
    };
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) f(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            unsigned long lim = std::min(m, r - k);
            for (unsigned long i = 0; i < lim; ++i) {
                f(y);
                mpz_class d = x - y;
                q = q * abs(d) % n;
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
        if (Clock::now() > deadline) return 0;
    }
    if (g == n) {
        do {
            f(ys);
            g = gcd(mpz_class(abs(x - ys)), n);
        } while (g == 1);
    }
    return g;
}

void split(const mpz_class& n, int mult, Clock::time_point deadline, std::map<mpz_class, int>& primes,
           std::map<mpz_class, int>& composite) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        primes[n] += mult;
        return;
    }
    mpz_class root;
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long e = 2; e < 4 * mpz_sizeinbase(n.get_mpz_t(), 2); ++e)
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e)) {
                split(root, mult * int(e), deadline, primes, composite);
                return;
            }
    }
    for (unsigned long c = 1; c < 64; ++c) {
        mpz_class d = rho(n, c, deadline);
        if (d == 0) break;
        if (d != n) {
            mpz_class e = n / d;
            mpz_class g = gcd(d, e);
            if (g == 1) {
                split(d, mult, deadline, primes, composite);
                split(e, mult, deadline, primes, composite);
            } else {
                // keep shared factors together so multiplicities add up
                split(g, mult, deadline, primes, composite);
                split(mpz_class(n / g), mult, deadline, primes, composite);
            }
            return;
        }
    }
    composite[n] += mult;
}

}  // namespace

Factorization factor_integer(const mpz_class& n_in, double budget_seconds, unsigned long trial_limit) {
    if (n_in == 0) throw std::domain_error("cannot factor zero");
    mpz_class n = abs(n_in);
    std::map<mpz_class, int> primes, composite;
    for (unsigned long p = 2; p <= trial_limit; p += (p == 2 ? 1 : 2)) {
        if (n == 1) break;
        if (mpz_class(p) * p > n) {
            break;
        }
        int v = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++v;
        }
        if (v) primes[mpz_class(p)] += v;
    }
    auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget_seconds));
    split(n, 1, deadline, primes, composite);
    Factorization out;
    for (auto& [p, e] : primes) out.primes.emplace_back(p, e);
    for (auto& [c, e] : composite) out.composite.emplace_back(c, e);
    return out;
}

}  // namespace cmq
