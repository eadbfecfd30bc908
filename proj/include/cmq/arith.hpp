#pragma once

#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cmq {

struct Factorization {
    std::vector<std::pair<mpz_class, int>> primes;     // probable primes, ascending
    std::vector<std::pair<mpz_class, int>> composite;  // cofactors the budget did not split
};

bool is_probable_prime(const mpz_class& n);
// |n| by trial division up to trial_limit, then Brent's rho within the time budget.
Factorization factor_integer(const mpz_class& n, double budget_seconds = 10.0, unsigned long trial_limit = 1000000);
// exponent of p in n (n != 0)
int valuation(const mpz_class& n, const mpz_class& p);
int valuation(const mpq_class& q, const mpz_class& p);

}  // namespace cmq
