#include "cmq/dixmier_ohno.hpp"

#include <climits>
#include <cmath>
#include <mutex>

#include "cmq/arith.hpp"
#include "cmq/data.hpp"

namespace cmq {

const std::array<const char*, 13> kDONames = {"I3",  "I6",  "I9",  "J9",  "I12", "J12", "I15",
                                              "J15", "I18", "J18", "I21", "J21", "I27"};

namespace {

template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;

template <class T>
T det3t(const Mat3<T>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <class T>
Mat3<T> adj3(const Mat3<T>& m) {
    Mat3<T> a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            a[std::size_t(i)][std::size_t(j)] = m[std::size_t(r0)][std::size_t(c0)] * m[std::size_t(r1)][std::size_t(c1)] -
                                                m[std::size_t(r0)][std::size_t(c1)] * m[std::size_t(r1)][std::size_t(c0)];
        }
    return a;
}

template <class T>
T trace_prod(const Mat3<T>& a, const Mat3<T>& b) {
    T s = a[0][0] * b[0][0];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i || j) s += a[std::size_t(i)][std::size_t(j)] * b[std::size_t(j)][std::size_t(i)];
    return s;
}

long pivot_weight(const mpq_class& x) { return sgn(x) ? 0 : LONG_MIN; }
long pivot_weight(const BigComplex& x) { return x.is_zero() ? LONG_MIN : absmax(x).exponent(); }

template <class T>
T det_gauss(std::vector<std::vector<T>> m, const T& zero) {
    std::size_t n = m.size();
    T det = scalar_like(zero, 1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = k;
        long w = pivot_weight(m[k][k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            long wi = pivot_weight(m[i][k]);
            if (wi > w) {
                w = wi;
                best = i;
            }
        }
        if (w == LONG_MIN) return zero;
        if (best != k) {
            std::swap(m[k], m[best]);
            det = -det;
        }
        det *= m[k][k];
        T inv = scalar_like(zero, 1) / m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (scalar_is_zero(m[i][k])) continue;
            T f = m[i][k] * inv;
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

// The minor of the Macaulay matrix counts as zero: exactly, or at half precision
// relative to the Hadamard bound.
bool negligible(const mpq_class& v, const std::vector<std::vector<mpq_class>>&) { return sgn(v) == 0; }
bool negligible(const BigComplex& v, const std::vector<std::vector<BigComplex>>& rows) {
    if (v.is_zero()) return true;
    prec_t p = v.prec();
    long bound = 0;
    for (auto& r : rows) {
        BigFloat s(p);
        for (auto& x : r) s += norm(x);
        if (s.is_zero()) return true;
        bound += (s.exponent() + 1) / 2;
    }
    return abs(v).exponent() < bound - long(p) / 2;
}

template <class T>
Form<T> substitute_form(const Form<T>& f, const std::array<std::array<long, 3>, 3>& m) {
    const T& zero = f.zero();
    std::array<Form<T>, 3> lin;
    for (std::size_t i = 0; i < 3; ++i) {
        lin[i] = Form<T>(1, zero);
        for (std::size_t j = 0; j < 3; ++j) lin[i][j] = scalar_like(zero, m[i][j]);
    }
    Form<T> r(f.degree(), zero);
    for (std::size_t n = 0; n < f.nterms(); ++n) {
        if (scalar_is_zero(f[n])) continue;
        auto e = Form<T>::exponents(f.degree(), int(n));
        Form<T> t(0, zero);
        t[0] = f[n];
        for (std::size_t v = 0; v < 3; ++v)
            for (int s = 0; s < e[v]; ++s) t = t * lin[v];
        r += t;
    }
    return r;
}

// Unimodular changes of variables tried when the extraneous factor vanishes.
const std::array<std::array<std::array<long, 3>, 3>, 4> kShears = {{
    {{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}}},
    {{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}},
    {{{1, 2, 1}, {0, 1, 1}, {1, 1, 1}}},
    {{{2, 1, 1}, {1, 1, 0}, {1, 0, 1}}},
}};

// Macaulay: the determinant of the degree-7 matrix built from the three
// partial derivatives, divided by its extraneous minor.
template <class T>
std::optional<T> macaulay_quotient(const Form<T>& f) {
    const T& zero = f.zero();
    std::array<Form<T>, 3> g = {f.derivative(0), f.derivative(1), f.derivative(2)};
    const int D = 7, n = Form<T>::size(D);
    std::vector<std::vector<T>> rows(std::size_t(n), std::vector<T>(std::size_t(n), zero));
    std::vector<std::size_t> extraneous;
    for (int r = 0; r < n; ++r) {
        auto m = Form<T>::exponents(D, r);
        int big = 0, first = -1;
        for (int v = 0; v < 3; ++v)
            if (m[std::size_t(v)] >= 3) {
                ++big;
                if (first < 0) first = v;
            }
        if (big >= 2) extraneous.push_back(std::size_t(r));
        auto q = m;
        q[std::size_t(first)] -= 3;
        const Form<T>& gi = g[std::size_t(first)];
        for (std::size_t t = 0; t < gi.nterms(); ++t) {
            auto e = Form<T>::exponents(3, int(t));
            rows[std::size_t(r)][std::size_t(Form<T>::index(D, q[0] + e[0], q[1] + e[1]))] += gi[t];
        }
    }
    std::vector<std::vector<T>> minor;
    for (std::size_t i : extraneous) {
        std::vector<T> row;
        for (std::size_t j : extraneous) row.push_back(rows[i][j]);
        minor.push_back(row);
    }
    T md = det_gauss(minor, zero);
    if (negligible(md, minor)) return std::nullopt;
    return det_gauss(rows, zero) / md;
}

template <class T>
T resultant_of(const Form<T>& f) {
    if (auto r = macaulay_quotient(f)) return *r;
    for (const auto& m : kShears)
        if (auto r = macaulay_quotient(substitute_form(f, m))) return *r;
    // every shear hit the extraneous locus: the gradient system is degenerate
    return f.zero();
}

template <class T>
std::array<T, 13> raw_invariants(const Form<T>& f) {
    const T& zero = f.zero();
    auto q = [&](long a, long b = 1) {
        mpq_class r(a, b);
        r.canonicalize();
        return scalar_like(zero, r);
    };

    // symmetric tensor of the quartic, as a 9x9 matrix on index pairs
    std::array<std::array<T, 9>, 9> ma;
    static const long fact[5] = {1, 1, 2, 6, 24};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    std::array<int, 3> e{0, 0, 0};
                    e[std::size_t(a)]++;
                    e[std::size_t(b)]++;
                    e[std::size_t(c)]++;
                    e[std::size_t(d)]++;
                    T v = f.at(e[0], e[1], e[2]) * q(fact[e[0]] * fact[e[1]] * fact[e[2]], 24);
                    ma[std::size_t(3 * a + b)][std::size_t(3 * c + d)] = v;
                }

    // K(u)_{ae} = eps_{aei} u_i
    Form<T> u[3] = {Form<T>::variable(0, zero), Form<T>::variable(1, zero), Form<T>::variable(2, zero)};
    std::array<std::array<Form<T>, 3>, 3> k;
    for (int a = 0; a < 3; ++a)
        for (int e = 0; e < 3; ++e) {
            k[std::size_t(a)][std::size_t(e)] = Form<T>(1, zero);
            if (a == e) continue;
            int i = 3 - a - e;
            bool even = (e == (a + 1) % 3);
            k[std::size_t(a)][std::size_t(e)] = u[i];
            if (!even) k[std::size_t(a)][std::size_t(e)] *= q(-1);
        }
    std::vector<std::vector<Form<T>>> nmat(9, std::vector<Form<T>>(9));
    for (int r = 0; r < 9; ++r)
        for (int s = 0; s < 9; ++s)
            nmat[std::size_t(r)][std::size_t(s)] = k[std::size_t(r / 3)][std::size_t(s / 3)] * k[std::size_t(r % 3)][std::size_t(s % 3)];
    std::vector<std::vector<Form<T>>> pm(9, std::vector<Form<T>>(9, Form<T>(2, zero)));
    for (int r = 0; r < 9; ++r)
        for (int t = 0; t < 9; ++t) {
            const T& c = ma[std::size_t(r)][std::size_t(t)];
            if (scalar_is_zero(c)) continue;
            for (int s = 0; s < 9; ++s) pm[std::size_t(r)][std::size_t(s)] += nmat[std::size_t(t)][std::size_t(s)] * c;
        }
    std::vector<std::vector<Form<T>>> pm2(9, std::vector<Form<T>>(9, Form<T>(4, zero)));
    for (int r = 0; r < 9; ++r)
        for (int t = 0; t < 9; ++t)
            for (int s = 0; s < 9; ++s) pm2[std::size_t(r)][std::size_t(s)] += pm[std::size_t(r)][std::size_t(t)] * pm[std::size_t(t)][std::size_t(s)];
    Form<T> sigma(4, zero), psi(6, zero);
    for (int r = 0; r < 9; ++r) {
        sigma += pm2[std::size_t(r)][std::size_t(r)];
        for (int s = 0; s < 9; ++s) psi += pm2[std::size_t(r)][std::size_t(s)] * pm[std::size_t(s)][std::size_t(r)];
    }
    psi *= q(1, 6);

    T i3 = apply_operator(sigma, f).value() * q(1, 144);

    static const int pairs[6][3] = {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    std::vector<std::vector<T>> cat(6, std::vector<T>(6, zero));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            int e0 = pairs[i][0] + pairs[j][0], e1 = pairs[i][1] + pairs[j][1], e2 = pairs[i][2] + pairs[j][2];
            cat[std::size_t(i)][std::size_t(j)] = f.at(e0, e1, e2) * q(fact[e0] * fact[e1] * fact[e2], 24);
        }
    T i6 = det_gauss(cat, zero);

    // Hessian
    Mat3<Form<T>> h;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h[std::size_t(i)][std::size_t(j)] = f.derivative(i).derivative(j);
    Form<T> he = det3t(h);

    Form<T> rho = apply_operator(f, psi) * q(1, 144);
    Form<T> tau = apply_operator(rho, f) * q(1, 12);
    Form<T> xi = apply_operator(sigma, he) * q(1, 72);
    Form<T> eta = apply_operator(xi, sigma) * q(1, 12);
    Form<T> nu = apply_operator(eta, apply_operator(rho, he)) * q(1, 8);

    auto j11 = [&](const Form<T>& cov, const Form<T>& contra) { return apply_operator(contra, cov).value(); };
    Mat3<T> rm = conic_matrix(rho), tm = conic_matrix(tau), xm = conic_matrix(xi), em = conic_matrix(eta);

    std::array<T, 13> out;
    out[0] = i3;
    out[1] = i6;
    out[2] = trace_prod(tm, rm);
    out[3] = j11(xi, rho);
    out[4] = det3t(rm);
    out[5] = j11(tau, eta);
    out[6] = det3t(tm);
    out[7] = det3t(xm);
    out[8] = trace_prod(adj3(tm), adj3(rm));
    out[9] = trace_prod(adj3(xm), adj3(rm));
    out[10] = det3t(em);
    out[11] = j11(nu, eta);
    out[12] = resultant_of(f);
    return out;
}

Form<mpq_class> rational_form(const RationalQuartic& q) {
    Form<mpq_class> f(4, mpq_class(0));
    for (std::size_t n = 0; n < 15; ++n) f[n] = q[n];
    return f;
}

bool all_zero(const RationalQuartic& q) {
    for (auto& c : q)
        if (sgn(c)) return false;
    return true;
}

}  // namespace

const DOCalibration& do_calibration() {
    static std::once_flag once;
    static DOCalibration cal;
    std::call_once(once, [] {
        const auto& j = bundled("do_calibration.json");
        cal.source = j.value("comment", "");
        for (std::size_t k = 0; k < 13; ++k) {
            std::string s = j.at("factors").at(kDONames[k]).get<std::string>();
            cal.factor[k] = mpq_class(s);
            cal.factor[k].canonicalize();
        }
    });
    return cal;
}

RationalDO raw_exact_DO(const RationalQuartic& q) {
    if (all_zero(q)) throw BadInput("zero quartic");
    return raw_invariants(rational_form(q));
}

ComplexDO raw_numeric_DO(const ComplexQuartic& q) { return raw_invariants(quartic_form(q)); }

RationalDO exact_DO(const RationalQuartic& q) {
    RationalDO t = raw_exact_DO(q);
    const auto& c = do_calibration();
    for (std::size_t k = 0; k < 13; ++k) t[k] *= c.factor[k];
    return t;
}

ComplexDO numeric_DO(const ComplexQuartic& q) {
    ComplexDO t = raw_numeric_DO(q);
    const auto& c = do_calibration();
    prec_t p = q[0].prec();
    for (std::size_t k = 0; k < 13; ++k) t[k] *= BigComplex(c.factor[k], p);
    return t;
}

mpq_class quartic_resultant(const RationalQuartic& q) { return resultant_of(rational_form(q)); }
BigComplex quartic_resultant(const ComplexQuartic& q) { return resultant_of(quartic_form(q)); }

RationalDO do_normalize(const RationalDO& t) {
    if (sgn(t[0]) == 0) throw LeadingInvariantZero("I3 vanishes");
    RationalDO r;
    for (std::size_t k = 0; k < 13; ++k) {
        mpq_class d;
        mpz_pow_ui(d.get_num_mpz_t(), t[0].get_num_mpz_t(), unsigned(kDOWeights[k] / 3));
        mpz_pow_ui(d.get_den_mpz_t(), t[0].get_den_mpz_t(), unsigned(kDOWeights[k] / 3));
        d.canonicalize();
        r[k] = t[k] / d;
    }
    return r;
}

namespace {

BigComplex cpow_int(const BigComplex& z, int e) {
    BigComplex r(1L, z.prec());
    for (int i = 0; i < e; ++i) r *= z;
    return r;
}

// Normalize by the lowest-weight nonzero entry: entry k / pivot^(w_k / w_pivot).
// Only the k with w_pivot | w_k are meaningful without roots, so compare those
// and the cross-ratios for the rest.
std::size_t complex_pivot(const ComplexDO& t, const BigFloat& tol) {
    BigFloat scale(t[0].prec());
    for (auto& x : t)
        if (abs(x) > scale) scale = abs(x);
    for (std::size_t k = 0; k < 13; ++k)
        if (abs(t[k]) > scale * tol) return k;
    return 13;
}

}  // namespace

ComplexDO do_normalize(const ComplexDO& t) {
    if (t[0].is_zero()) throw LeadingInvariantZero("I3 vanishes");
    ComplexDO r;
    BigComplex inv = BigComplex(1L, t[0].prec()) / t[0];
    for (std::size_t k = 0; k < 13; ++k) r[k] = t[k] * cpow_int(inv, kDOWeights[k] / 3);
    return r;
}

bool weighted_projective_equal(const ComplexDO& s, const ComplexDO& t, const BigFloat& tol) {
    std::size_t ps = complex_pivot(s, tol), pt = complex_pivot(t, tol);
    if (ps != pt) return false;
    if (ps == 13) return true;
    // s_k^(w_p) t_p^(w_k) = t_k^(w_p) s_p^(w_k) for all k, in the form
    // s_k / s_p^(w_k/w_p) when the weights divide; use the cross form otherwise.
    int wp = kDOWeights[ps] / 3;
    for (std::size_t k = 0; k < 13; ++k) {
        int wk = kDOWeights[k] / 3;
        BigComplex lhs = cpow_int(s[k], wp) * cpow_int(t[ps], wk);
        BigComplex rhs = cpow_int(t[k], wp) * cpow_int(s[ps], wk);
        BigFloat size = abs(lhs) > abs(rhs) ? abs(lhs) : abs(rhs);
        BigFloat ref = abs(cpow_int(s[ps], wk)) * abs(cpow_int(t[ps], wk));
        // relative to the normalized scale so vanishing entries compare fine
        BigFloat den = ref > size ? ref : size;
        if (den.is_zero()) continue;
        if (abs(lhs - rhs) > tol * den) return false;
    }
    return true;
}

bool weighted_projective_equal(const RationalDO& s, const RationalDO& t) {
    std::size_t ps = 13, pt = 13;
    for (std::size_t k = 0; k < 13 && ps == 13; ++k)
        if (sgn(s[k])) ps = k;
    for (std::size_t k = 0; k < 13 && pt == 13; ++k)
        if (sgn(t[k])) pt = k;
    if (ps != pt) return false;
    if (ps == 13) return true;
    auto pw = [](const mpq_class& x, int e) {
        mpq_class r;
        mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), unsigned(e));
        mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), unsigned(e));
        return r;
    };
    int wp = kDOWeights[ps] / 3;
    for (std::size_t k = 0; k < 13; ++k) {
        int wk = kDOWeights[k] / 3;
        if (pw(s[k], wp) * pw(t[ps], wk) != pw(t[k], wp) * pw(s[ps], wk)) return false;
    }
    return true;
}

namespace {

// Continued-fraction convergents of x until one matches x to its own precision,
// or the denominator bound is exceeded (then the last admissible one).
mpq_class best_approximation(const BigFloat& x, const mpz_class& qmax) {
    prec_t p = x.prec();
    if (!x.is_finite()) throw Unstable("non-finite value");
    BigFloat tol = pow2(16 - long(p), p);
    BigFloat ax = abs(x);
    if (ax > BigFloat(1L, p)) tol *= ax;
    mpz_class p0 = 1, q0 = 0, p1, q1 = 1;
    BigFloat r = x;
    BigFloat a = floor(r);
    p1 = a.round_to_integer();
    BigFloat frac = r - a;
    for (int it = 0; it < 100000; ++it) {
        mpq_class cur(p1, q1);
        BigFloat err = abs(x - BigFloat(cur, p));
        if (err <= tol) return cur;
        if (frac.is_zero()) return cur;
        r = BigFloat(1L, p) / frac;
        a = floor(r);
        frac = r - a;
        mpz_class ai = a.round_to_integer();
        mpz_class p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > qmax) return cur;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return mpq_class(p1, q1);
}

}  // namespace

mpq_class rational_recognize(const BigFloat& x, long max_den_digits) {
    mpz_class qmax;
    mpz_ui_pow_ui(qmax.get_mpz_t(), 10, (unsigned long)max_den_digits);
    mpq_class full = best_approximation(x, qmax);
    mpq_class half = best_approximation(x.with_prec(x.prec() / 2), qmax);
    if (full != half) throw Unstable("rational approximation changes with precision");
    // the match must also be tight at full precision
    prec_t p = x.prec();
    BigFloat err = abs(x - BigFloat(full, p));
    BigFloat tol = pow2(16 - long(p), p);
    if (abs(x) > BigFloat(1L, p)) tol *= abs(x);
    if (err > tol) throw Unstable("no rational within the denominator bound matches");
    return full;
}

MinimalDO minimal_representative(const RationalDO& t) {
    RationalDO n = do_normalize(t);
    mpz_class lambda = 1;
    for (auto& x : n) lambda = lcm(lambda, mpz_class(x.get_den()));
    MinimalDO e;
    for (std::size_t k = 0; k < 13; ++k) {
        mpz_class lp;
        mpz_pow_ui(lp.get_mpz_t(), lambda.get_mpz_t(), unsigned(kDOWeights[k] / 3));
        mpq_class v = n[k] * lp;
        if (v.get_den() != 1) throw std::logic_error("clearing denominators failed");
        e[k] = v.get_num();
    }
    // the first entry is lambda; only its primes can divide with weights
    Factorization fl = factor_integer(lambda);
    std::vector<mpz_class> ps;
    for (auto& pr : fl.primes) ps.push_back(pr.first);
    for (auto& pr : fl.composite) ps.push_back(pr.first);
    for (const mpz_class& p : ps) {
        for (;;) {
            bool ok = true;
            for (std::size_t k = 0; k < 13 && ok; ++k) {
                if (e[k] == 0) continue;
                int need = kDOWeights[k] / 3;
                mpz_class pn;
                mpz_pow_ui(pn.get_mpz_t(), p.get_mpz_t(), unsigned(need));
                if (!mpz_divisible_p(e[k].get_mpz_t(), pn.get_mpz_t())) ok = false;
            }
            if (!ok) break;
            for (std::size_t k = 0; k < 13; ++k) {
                mpz_class pn;
                mpz_pow_ui(pn.get_mpz_t(), p.get_mpz_t(), unsigned(kDOWeights[k] / 3));
                mpz_divexact(e[k].get_mpz_t(), e[k].get_mpz_t(), pn.get_mpz_t());
            }
        }
    }
    return e;
}

DiscriminantReport discriminant_report(const RationalQuartic& q) {
    RationalDO t = exact_DO(q);
    if (sgn(t[12]) == 0) throw SingularCurve("I27 vanishes");
    return discriminant_factors(minimal_representative(t)[12]);
}

DiscriminantReport discriminant_factors(const mpz_class& i27_min) {
    if (sgn(i27_min) == 0) throw SingularCurve("I27 vanishes");
    DiscriminantReport r;
    r.i27_min = i27_min;
    r.sign = sgn(i27_min) < 0 ? -1 : 1;
    mpz_class rest = abs(i27_min);
    for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) {
        int v = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++v;
        }
        if (v) r.small.emplace_back(mpz_class(p), v);
    }
    if (rest != 1) {
        Factorization f = factor_integer(rest);
        r.primes = f.primes;
        r.composite = f.composite;
    }
    return r;
}

RationalQuartic substitute(const RationalQuartic& q, const std::array<std::array<long, 3>, 3>& m) {
    Form<mpq_class> f = substitute_form(rational_form(q), m);
    RationalQuartic r;
    for (std::size_t n = 0; n < 15; ++n) r[n] = f[n];
    return r;
}

RationalQuartic parse_quartic(const std::vector<std::string>& coeffs) {
    if (coeffs.size() != 15) throw BadInput("a quartic needs 15 coefficients");
    RationalQuartic q;
    for (std::size_t n = 0; n < 15; ++n) q[n] = parse_rational(coeffs[n]);
    return q;
}

ComplexQuartic to_complex(const RationalQuartic& q, prec_t prec) {
    ComplexQuartic c;
    for (std::size_t n = 0; n < 15; ++n) c[n] = BigComplex(q[n], prec);
    return c;
}

}  // namespace cmq
