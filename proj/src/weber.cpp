#include "cmq/weber.hpp"

#include <algorithm>

namespace cmq {

const std::array<int, 18> kWeberThetas = {33, 5, 40, 12, 21, 49, 28, 56, 7, 35, 14, 42, 54, 27, 2, 47, 16, 61};

WeberModuli weber_moduli(const ThetaVector& theta) {
    if (theta.values.size() != 64) throw BadInput("theta vector must have 64 entries");
    prec_t p = theta.prec;
    BigFloat eps = pow2(-long(p) / 2, p);
    for (int i : kWeberThetas)
        if (abs(theta[i]) < eps) throw DegenerateThetas("theta_" + std::to_string(i) + " vanishes");
    auto q = [&](int n1, int n2, int d1, int d2) { return theta[n1] * theta[n2] / (theta[d1] * theta[d2]); };
    WeberModuli w;
    w.a = CMatrix(3, 3);
    w.a(0, 0) = q(33, 5, 40, 12).times_i();
    w.a(0, 1) = q(21, 49, 28, 56).times_i();
    w.a(0, 2) = q(7, 35, 14, 42).times_i();
    w.a(1, 0) = q(5, 54, 27, 40).times_i();
    w.a(1, 1) = q(49, 2, 47, 28).times_i();
    w.a(1, 2) = q(35, 16, 61, 14).times_i();
    w.a(2, 0) = -q(54, 33, 12, 27);
    w.a(2, 1) = q(2, 21, 56, 47);
    w.a(2, 2) = q(16, 7, 42, 61);
    return w;
}

Form<BigComplex> quartic_form(const ComplexQuartic& q) {
    Form<BigComplex> f(4, BigComplex(q[0].prec()));
    for (std::size_t n = 0; n < 15; ++n) f[n] = q[n];
    return f;
}

ComplexQuartic quartic_coeffs(const Form<BigComplex>& f) {
    if (f.degree() != 4) throw BadInput("not a quartic");
    ComplexQuartic q;
    for (std::size_t n = 0; n < 15; ++n) q[n] = f[n];
    return q;
}

ComplexQuartic reconstruct_quartic(const WeberModuli& w) {
    const CMatrix& a = w.a;
    prec_t p = a(0, 0).prec();
    CMatrix m1(3, 3), m2(3, 3);
    BigComplex one(1L, p);
    for (std::size_t j = 0; j < 3; ++j) {
        m1(0, j) = one;
        m2(0, j) = one;
        for (std::size_t i = 0; i < 2; ++i) {
            m1(i + 1, j) = one / a(i, j);
            m2(i + 1, j) = a(i, j);
        }
    }
    CMatrix u;
    try {
        u = mat3_inverse(m1, p) * m2;
    } catch (const SingularMatrix&) {
        throw SingularSystem("the linear system for the u_i is singular");
    }
    // two coinciding systems give u = identity, a degenerate quartic
    BigFloat tol = pow2(-long(p) / 2, p);
    if (norm_inf(u - cidentity(3, p)) < tol) throw SingularSystem("the two systems coincide");

    BigComplex zero(p);
    std::array<Form<BigComplex>, 3> x, ul;
    for (int v = 0; v < 3; ++v) x[std::size_t(v)] = Form<BigComplex>::variable(v, zero);
    for (std::size_t i = 0; i < 3; ++i) {
        ul[i] = Form<BigComplex>(1, zero);
        for (std::size_t k = 0; k < 3; ++k) ul[i][k] = u(i, k);
    }
    Form<BigComplex> a1 = x[0] * ul[0], a2 = x[1] * ul[1], a3 = x[2] * ul[2];
    Form<BigComplex> s = a1 + a2 - a3;
    Form<BigComplex> f = s * s - (a1 * a2) * BigComplex(4L, p);
    return quartic_coeffs(f);
}

std::vector<Line> aronhold_lines(const WeberModuli& w) {
    prec_t p = w.a(0, 0).prec();
    std::vector<Line> out;
    for (int v = 0; v < 3; ++v) {
        Line l{BigComplex(p), BigComplex(p), BigComplex(p)};
        l[std::size_t(v)] = BigComplex(1L, p);
        out.push_back(l);
    }
    out.push_back(Line{BigComplex(1L, p), BigComplex(1L, p), BigComplex(1L, p)});
    // the rows of a: these are the lines the linear system for u is built from
    for (std::size_t i = 0; i < 3; ++i) out.push_back(Line{w.a(i, 0), w.a(i, 1), w.a(i, 2)});
    return out;
}

namespace {

using Binary = std::vector<BigComplex>;  // c[k] is the coefficient of s^(d-k) t^k

Binary bmul(const Binary& a, const Binary& b, prec_t p) {
    Binary r(a.size() + b.size() - 1, BigComplex(p));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

}  // namespace

BigFloat bitangency_defect(const ComplexQuartic& q, const Line& line) {
    prec_t p = q[0].prec();
    std::size_t k = 0;
    for (std::size_t v = 1; v < 3; ++v)
        if (abs(line[v]) > abs(line[k])) k = v;
    if (line[k].is_zero()) throw BadInput("zero line");
    // points spanning the line: e_i - (l_i / l_k) e_k for the two i != k
    std::array<Binary, 3> coord;
    std::size_t slot = 0;
    for (std::size_t v = 0; v < 3; ++v) {
        if (v == k) continue;
        coord[v] = Binary(2, BigComplex(p));
        coord[v][slot] = BigComplex(1L, p);
        ++slot;
    }
    coord[k] = Binary(2, BigComplex(p));
    slot = 0;
    for (std::size_t v = 0; v < 3; ++v) {
        if (v == k) continue;
        coord[k][slot] = -(line[v] / line[k]);
        ++slot;
    }
    Binary r(5, BigComplex(p));
    for (std::size_t n = 0; n < 15; ++n) {
        if (q[n].is_zero()) continue;
        auto e = Form<BigComplex>::exponents(4, int(n));
        Binary term{q[n]};
        for (std::size_t v = 0; v < 3; ++v)
            for (int s = 0; s < e[v]; ++s) term = bmul(term, coord[v], p);
        for (std::size_t i = 0; i < 5; ++i) r[i] += term[i];
    }
    BigFloat size(p);
    for (auto& c : r)
        if (abs(c) > size) size = abs(c);
    if (size.is_zero()) return size;
    // take the square root from whichever end carries the larger coefficient
    if (abs(r[0]) < abs(r[4])) std::reverse(r.begin(), r.end());
    if (abs(r[0]) <= size * pow2(-long(p) / 2, p)) {
        // r = s t (r1 s^2 + r2 s t + r3 t^2): a square only as r2 s^2 t^2
        return (abs(r[1]) + abs(r[3])) / size;
    }
    BigComplex al = complex_sqrt(r[0], p);
    BigComplex two_al = al + al;
    BigComplex be = r[1] / two_al;
    BigComplex ga = (r[2] - be * be) / two_al;
    BigComplex e1 = r[3] - (be * ga + be * ga);
    BigComplex e0 = r[4] - ga * ga;
    return (abs(e1) + abs(e0)) / size;
}

}  // namespace cmq
