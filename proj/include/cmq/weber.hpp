#pragma once

#include <array>
#include <vector>

#include "cmq/ternary.hpp"
#include "cmq/theta.hpp"

namespace cmq {

struct WeberModuli {
    CMatrix a;  // a(i, j) as indexed by the theta quotients; row i is a bitangent
};

// 15 coefficients in the Form<..> order for degree 4.
using ComplexQuartic = std::array<BigComplex, 15>;
using Line = std::array<BigComplex, 3>;

// The theta indices entering the moduli; all must be nonzero.
extern const std::array<int, 18> kWeberThetas;

WeberModuli weber_moduli(const ThetaVector& theta);
ComplexQuartic reconstruct_quartic(const WeberModuli& a);
// x1, x2, x3, x1+x2+x3 and the three lines sum_j a_ij x_j.
std::vector<Line> aronhold_lines(const WeberModuli& a);

// Distance of the restriction of q to the line from a perfect square, relative
// to the size of the restriction.
BigFloat bitangency_defect(const ComplexQuartic& q, const Line& line);

Form<BigComplex> quartic_form(const ComplexQuartic& q);
ComplexQuartic quartic_coeffs(const Form<BigComplex>& f);

}  // namespace cmq
