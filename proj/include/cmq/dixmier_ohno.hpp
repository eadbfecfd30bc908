#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmq/weber.hpp"

namespace cmq {

using RationalQuartic = std::array<mpq_class, 15>;

// Order: I3, I6, I9, J9, I12, J12, I15, J15, I18, J18, I21, J21, I27.
constexpr std::array<int, 13> kDOWeights = {3, 6, 9, 9, 12, 12, 15, 15, 18, 18, 21, 21, 27};
extern const std::array<const char*, 13> kDONames;

using RationalDO = std::array<mpq_class, 13>;
using ComplexDO = std::array<BigComplex, 13>;
using MinimalDO = std::array<mpz_class, 13>;

// Per-invariant constants multiplying the raw covariant constructions.
struct DOCalibration {
    RationalDO factor;
    std::string source;
};
// Loaded once from do_calibration.json in the data directory.
const DOCalibration& do_calibration();

// The invariants before calibration.
RationalDO raw_exact_DO(const RationalQuartic& q);
ComplexDO raw_numeric_DO(const ComplexQuartic& q);

RationalDO exact_DO(const RationalQuartic& q);
ComplexDO numeric_DO(const ComplexQuartic& q);

// Discriminant of the quartic from the Macaulay quotient for its gradient.
mpq_class quartic_resultant(const RationalQuartic& q);
BigComplex quartic_resultant(const ComplexQuartic& q);

RationalDO do_normalize(const RationalDO& t);
ComplexDO do_normalize(const ComplexDO& t);

// Relative entrywise comparison of the normalizations.  Falls back to the
// lowest-weight nonzero entry as pivot when I3 vanishes.
bool weighted_projective_equal(const ComplexDO& s, const ComplexDO& t, const BigFloat& tol);
bool weighted_projective_equal(const RationalDO& s, const RationalDO& t);

// Best rational approximation with denominator at most 10^max_den_digits,
// accepted only when x and x rounded to half its precision agree.
mpq_class rational_recognize(const BigFloat& x, long max_den_digits = 100);

MinimalDO minimal_representative(const RationalDO& t);

struct DiscriminantReport {
    mpz_class i27_min;
    int sign = 1;
    std::vector<std::pair<mpz_class, int>> small;      // primes 2, 3, 5, 7
    std::vector<std::pair<mpz_class, int>> primes;     // the prime-to-{2,3,5,7} part
    std::vector<std::pair<mpz_class, int>> composite;  // cofactors left unfactored
};
DiscriminantReport discriminant_report(const RationalQuartic& q);
DiscriminantReport discriminant_factors(const mpz_class& i27_min);

// Q o M for an integer matrix M acting on (x, y, z).
RationalQuartic substitute(const RationalQuartic& q, const std::array<std::array<long, 3>, 3>& m);
RationalQuartic parse_quartic(const std::vector<std::string>& coeffs);
ComplexQuartic to_complex(const RationalQuartic& q, prec_t prec);

}  // namespace cmq
