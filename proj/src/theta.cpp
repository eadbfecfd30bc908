#include "cmq/theta.hpp"

#include <algorithm>
#include <cmath>

namespace cmq {

int theta_index(const ThetaChar& c) {
    int i = 0;
    for (int k = 0; k < 3; ++k) {
        if ((c.a2[k] | c.b2[k]) & ~1) throw BadInput("characteristic entries must be 0 or 1/2");
        i |= c.b2[k] << k;
        i |= c.a2[k] << (3 + k);
    }
    return i;
}

ThetaChar index_to_char(int i) {
    if (i < 0 || i > 63) throw BadInput("theta index out of range");
    ThetaChar c;
    for (int k = 0; k < 3; ++k) {
        c.b2[k] = (i >> k) & 1;
        c.a2[k] = (i >> (3 + k)) & 1;
    }
    return c;
}

bool is_even_char(int i) { return (__builtin_popcount(unsigned(i & 7) & unsigned(i >> 3)) & 1) == 0; }

namespace {

const long kGuardBits = 48;

void mul_assign(BigComplex& x, const BigComplex& y, BigComplex& tmp, BigFloat& s) {
    mul_into(tmp, x, y, s);
    swap(x, tmp);
}

BigComplex cpow(const BigComplex& q, long k, prec_t wp) {
    BigComplex base = k < 0 ? BigComplex(1L, wp) / q : q;
    unsigned long e = (unsigned long)(k < 0 ? -k : k);
    BigComplex r(1L, wp);
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

struct QTable {
    BigComplex q[3][3];
    BigComplex sq[3][3];  // squares
};

QTable make_qtable(const CMatrix& tau, prec_t wp) {
    QTable t;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            t.q[i][j] = exp_pi_i(tau(i, j).with_prec(wp));
            t.q[j][i] = t.q[i][j];
            t.sq[i][j] = t.q[i][j] * t.q[i][j];
            t.sq[j][i] = t.sq[i][j];
        }
    return t;
}

// Adds exp(pi i w^T tau w / 4) over the doubled lattice points w with
// w_k = lo_k, lo_k + 2, ..., hi_k, into acc[class], where bit k of the class is
// the parity of (w_k - a_k)/2.  Every term comes from its neighbour by the q
// recursion; only the box corner uses an exponential.
void box_sum(const CMatrix& tau, const QTable& qt, const std::array<long, 3>& lo, const std::array<long, 3>& hi,
             const std::array<int, 3>& a, Fundamentals& acc, prec_t wp) {
    for (int k = 0; k < 3; ++k)
        if (lo[k] > hi[k]) return;
    BigComplex expo(wp);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) expo += tau(i, j).with_prec(wp) * BigFloat(lo[i] * lo[j], wp);
    expo.mul_2si(-2);
    BigComplex ta = exp_pi_i(expo);
    BigComplex g1 = cpow(qt.q[0][0], lo[0] + 1, wp) * cpow(qt.q[0][1], lo[1], wp) * cpow(qt.q[0][2], lo[2], wp);
    BigComplex g2row = cpow(qt.q[1][1], lo[1] + 1, wp) * cpow(qt.q[0][1], lo[0], wp) * cpow(qt.q[1][2], lo[2], wp);
    BigComplex f3row = cpow(qt.q[2][2], lo[2] + 1, wp) * cpow(qt.q[0][2], lo[0], wp) * cpow(qt.q[1][2], lo[1], wp);

    BigComplex tmp(wp), t(wp), f(wp), tb(wp), g2(wp), f3(wp);
    BigFloat s(wp);
    auto cls_bit = [&](long w, int k) { return int(((w - a[k]) / 2) & 1); };
    for (long w1 = lo[0]; w1 <= hi[0]; w1 += 2) {
        tb = ta;
        g2 = g2row;
        f3 = f3row;
        int c1 = cls_bit(w1, 0);
        for (long w2 = lo[1]; w2 <= hi[1]; w2 += 2) {
            t = tb;
            f = f3;
            int c12 = c1 | (cls_bit(w2, 1) << 1);
            int c3 = cls_bit(lo[2], 2);
            for (long w3 = lo[2]; w3 <= hi[2]; w3 += 2) {
                BigComplex& dst = acc[std::size_t(c12 | (c3 << 2))];
                mpfr_add(dst.re.get(), dst.re.get(), t.re.get(), MPFR_RNDN);
                mpfr_add(dst.im.get(), dst.im.get(), t.im.get(), MPFR_RNDN);
                c3 ^= 1;
                if (w3 + 2 <= hi[2]) {
                    mul_assign(t, f, tmp, s);
                    mul_assign(f, qt.sq[2][2], tmp, s);
                }
            }
            if (w2 + 2 <= hi[1]) {
                mul_assign(tb, g2, tmp, s);
                mul_assign(g2, qt.sq[1][1], tmp, s);
                mul_assign(f3, qt.sq[1][2], tmp, s);
            }
        }
        if (w1 + 2 <= hi[0]) {
            mul_assign(ta, g1, tmp, s);
            mul_assign(g1, qt.sq[0][0], tmp, s);
            mul_assign(g2row, qt.sq[0][1], tmp, s);
            mul_assign(f3row, qt.sq[0][2], tmp, s);
        }
    }
}

Fundamentals zero_fund(prec_t wp) {
    Fundamentals f;
    for (auto& x : f) x = BigComplex(wp);
    return f;
}

// theta[0;b] = sum over parity classes c of (-1)^(c.b) S_c
Fundamentals hadamard(const Fundamentals& s, prec_t out) {
    Fundamentals r;
    for (int b = 0; b < 8; ++b) {
        BigComplex acc(s[0].prec());
        for (int c = 0; c < 8; ++c) {
            if (__builtin_popcount(unsigned(b & c)) & 1)
                acc -= s[std::size_t(c)];
            else
                acc += s[std::size_t(c)];
        }
        r[std::size_t(b)] = acc.with_prec(out);
    }
    return r;
}

// Fundamentals by the symmetric cube sum of side 2B+1.
Fundamentals cube_fundamentals(const CMatrix& tau, long b, prec_t p_bits) {
    double terms = std::pow(2.0 * double(b) + 1.0, 3.0);
    prec_t wp = p_bits + kGuardBits + prec_t(std::ceil(std::log2(terms * double(4 * b + 4))));
    QTable qt = make_qtable(tau, wp);
    Fundamentals acc = zero_fund(wp);
    std::array<int, 3> a0{0, 0, 0};
    long m = 2 * b;
    // half of the cube modulo n -> -n, then double
    box_sum(tau, qt, {2, -m, -m}, {m, m, m}, a0, acc, wp);
    box_sum(tau, qt, {0, 2, -m}, {0, m, m}, a0, acc, wp);
    box_sum(tau, qt, {0, 0, 2}, {0, 0, m}, a0, acc, wp);
    for (auto& x : acc) x.mul_2si(1);
    acc[0].re += BigFloat(1L, wp);
    return hadamard(acc, p_bits);
}

double min_eigenvalue(const RMatrix& y) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = y(i, j).to_double();
    // symmetric 3x3 closed form
    double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    double q = (a[0][0] + a[1][1] + a[2][2]) / 3;
    double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) + (a[2][2] - q) * (a[2][2] - q) + 2 * p1;
    double p = std::sqrt(p2 / 6);
    if (p == 0) return q;
    double bm[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) bm[i][j] = (a[i][j] - (i == j ? q : 0)) / p;
    double r = (bm[0][0] * (bm[1][1] * bm[2][2] - bm[1][2] * bm[2][1]) - bm[0][1] * (bm[1][0] * bm[2][2] - bm[1][2] * bm[2][0]) +
                bm[0][2] * (bm[1][0] * bm[2][1] - bm[1][1] * bm[2][0])) /
               2;
    r = std::clamp(r, -1.0, 1.0);
    double phi = std::acos(r) / 3;
    return q + 2 * p * std::cos(phi + 2 * M_PI / 3);
}

// Box half-width for an arbitrary tau from a lower bound on the spectrum of Im tau.
long generic_bound(const RMatrix& y, prec_t p_bits) {
    double lam = min_eigenvalue(y);
    if (!(lam > 0)) throw NotPositiveDefinite("Im tau is not positive definite");
    double c = 0.98 * lam;
    double num = double(p_bits) * std::log(2.0) + std::log(48.0) - 3 * std::log1p(-std::exp(-M_PI * c));
    return long(std::ceil(std::sqrt(num / (M_PI * c)))) + 1;
}

RiemannMatrix scaled(const RiemannMatrix& t, long e) {
    CMatrix m = t.tau;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j).mul_2si(e);
    return RiemannMatrix(m, t.prec);
}

RiemannMatrix lowered(const RiemannMatrix& t, prec_t p) { return RiemannMatrix(with_prec(t.tau, p), p); }

}  // namespace

long truncation_bound(const RMatrix& y, prec_t p_bits) {
    if (!is_positive_definite(y)) throw NotPositiveDefinite("Im tau is not positive definite");
    if (!is_minkowski_reduced(y, 1e-30)) throw NotReduced("Im tau fails the Minkowski conditions");
    double c = minkowski_constant(y).to_double();
    double b = std::sqrt((double(p_bits) * std::log(2.0) + 14.09) / (M_PI * c));
    return long(std::ceil(b));
}

Fundamentals theta_naive_fundamental(const RiemannMatrix& tau, prec_t p_bits) {
    check_riemann_matrix(tau);
    BigFloat lim(0.5, tau.prec);
    lim += pow2(-long(tau.prec) / 2, tau.prec);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (abs(tau(i, j).re) > lim) throw NotReduced("real part outside [-1/2, 1/2]");
    RMatrix y = imag_part(tau.tau);
    long b;
    try {
        b = truncation_bound(y, p_bits);
    } catch (const NotReduced&) {
        // an LLL-reduced Y: the spectral bound is still a valid certificate
        b = generic_bound(y, p_bits);
    }
    return cube_fundamentals(tau.tau, b, p_bits);
}

Fundamentals theta_box_fundamental(const RiemannMatrix& tau, long bound, prec_t p_bits) {
    if (bound < 0) throw BadInput("negative box bound");
    return cube_fundamentals(tau.tau, bound, p_bits);
}

Fundamentals theta_direct_fundamental(const RiemannMatrix& tau, prec_t p_bits) {
    long b = generic_bound(imag_part(tau.tau), p_bits + 16);
    return cube_fundamentals(tau.tau, b, p_bits);
}

std::vector<BigComplex> theta_direct_all(const RiemannMatrix& tau, prec_t p_bits) {
    RMatrix y = imag_part(tau.tau);
    long b = generic_bound(y, p_bits + 16) + 1;
    double terms = std::pow(2.0 * double(b) + 2.0, 3.0);
    prec_t wp = p_bits + kGuardBits + prec_t(std::ceil(std::log2(terms * double(4 * b + 8))));
    QTable qt = make_qtable(tau.tau, wp);
    std::vector<BigComplex> out(64);
    for (int a = 0; a < 8; ++a) {
        std::array<int, 3> a2{a & 1, (a >> 1) & 1, (a >> 2) & 1};
        std::array<long, 3> lo, hi;
        for (int k = 0; k < 3; ++k) {
            lo[k] = -(2 * b + a2[k]);
            hi[k] = 2 * b + a2[k];
        }
        Fundamentals acc = zero_fund(wp);
        box_sum(tau.tau, qt, lo, hi, a2, acc, wp);
        Fundamentals h = hadamard(acc, wp);
        for (int bb = 0; bb < 8; ++bb) {
            BigComplex v = h[std::size_t(bb)];
            // factor i^(a.b)
            int e = __builtin_popcount(unsigned(a & bb)) & 3;
            for (int r = 0; r < e; ++r) v = v.times_i();
            out[std::size_t(bb | (a << 3))] = v.with_prec(p_bits);
        }
    }
    for (int i = 0; i < 64; ++i)
        if (!is_even_char(i)) out[std::size_t(i)] = BigComplex(p_bits);
    return out;
}

std::vector<BigComplex> duplication_all_squares(const Fundamentals& f) {
    prec_t p = f[0].prec();
    // prod[b][beta] = f[b ^ beta] * f[beta]
    BigComplex prod[8][8];
    for (int b = 0; b < 8; ++b)
        for (int be = 0; be < 8; ++be) {
            int o = b ^ be;
            if (o < be) {
                prod[b][be] = prod[b][o];
            } else {
                prod[b][be] = f[std::size_t(o)] * f[std::size_t(be)];
            }
        }
    std::vector<BigComplex> out(64);
    for (int i = 0; i < 64; ++i) {
        int b = i & 7, a = i >> 3;
        BigComplex s(p);
        for (int be = 0; be < 8; ++be) {
            if (__builtin_popcount(unsigned(a & be)) & 1)
                s -= prod[b][be];
            else
                s += prod[b][be];
        }
        s.mul_2si(-3);
        out[std::size_t(i)] = s;
    }
    return out;
}

namespace {

// Pick the root of sq closest to the hint; AmbiguousSign if the hint cannot tell.
BigComplex matched_root(const BigComplex& sq, const BigComplex& hint, prec_t prec, const BigFloat& hint_err) {
    BigComplex w = complex_sqrt(sq, prec);
    BigFloat d1 = abs(w - hint), d2 = abs(w + hint);
    BigFloat gap = abs(d1 - d2);
    if (gap <= hint_err * BigFloat(4L, prec)) throw AmbiguousSign("square root hint does not separate the two roots");
    return d2 < d1 ? BigComplex(-w) : w;
}

}  // namespace

ThetaVector resolve_square_roots(const std::vector<BigComplex>& squares, const RiemannMatrix& tau,
                                 const std::vector<BigComplex>& hints) {
    if (squares.size() != 64 || hints.size() != 64) throw BadInput("need 64 squares and hints");
    prec_t prec = squares[0].prec();
    ThetaVector tv;
    tv.prec = prec;
    tv.at_tau = tau;
    tv.values.resize(64);
    prec_t hp = hints[0].prec();
    BigFloat scale(prec);
    for (auto& h : hints) {
        BigFloat a = abs(h.with_prec(prec));
        if (a > scale) scale = a;
    }
    BigFloat herr = scale * pow2(16 - long(hp), prec);
    for (int i = 0; i < 64; ++i) {
        if (!is_even_char(i)) {
            tv.values[std::size_t(i)] = BigComplex(prec);
            continue;
        }
        BigComplex h = hints[std::size_t(i)].with_prec(prec);
        // vanishing even constants (decomposable tau): square and hint both zero to precision
        const BigComplex& sq = squares[std::size_t(i)];
        if (sq.is_zero() || (abs(h) <= herr && abs(sq) <= scale * scale * pow2(-long(prec) / 2, prec))) {
            tv.values[std::size_t(i)] = BigComplex(prec);
            continue;
        }
        tv.values[std::size_t(i)] = matched_root(squares[std::size_t(i)], h, prec, herr);
    }
    return tv;
}

ThetaVector resolve_square_roots(const std::vector<BigComplex>& squares, const RiemannMatrix& tau, long hint_digits) {
    prec_t hb = digits_to_bits(hint_digits);
    std::vector<BigComplex> hints = theta_direct_all(lowered(tau, hb + 64), hb);
    return resolve_square_roots(squares, tau, hints);
}

Fundamentals borchardt_step(const Fundamentals& t, const Fundamentals& r) {
    prec_t p = t[0].prec();
    Fundamentals out;
    BigComplex s0(p);
    for (auto& x : t) s0 += x;
    s0.mul_2si(-3);
    out[0] = s0;
    BigComplex tmp(p);
    BigFloat sc(p);
    for (int c = 1; c < 8; ++c) {
        BigComplex acc(p);
        for (int be = 0; be < 8; ++be) {
            int o = be ^ c;
            if (o < be) continue;
            mul_into(tmp, r[std::size_t(be)], r[std::size_t(o)], sc);
            acc += tmp;
        }
        acc.mul_2si(-2);
        out[std::size_t(c)] = acc;
    }
    return out;
}

namespace {

bool converged(const Fundamentals& t, prec_t prec) {
    BigFloat lim = abs(t[0]) * pow2(6 - long(prec), prec);
    for (int b = 1; b < 8; ++b)
        if (abs(t[std::size_t(b)] - t[0]) > lim) return false;
    return true;
}

long iteration_cap(prec_t prec) { return 40 + 4 * long(std::ceil(std::log2(double(prec)))); }

}  // namespace

BigComplex borchardt_mean_good(const Fundamentals& t_in, prec_t prec) {
    Fundamentals t;
    for (int b = 0; b < 8; ++b) t[std::size_t(b)] = t_in[std::size_t(b)].with_prec(prec);
    for (long it = 0; it < iteration_cap(prec); ++it) {
        if (converged(t, prec)) return t[0];
        Fundamentals r;
        for (int b = 0; b < 8; ++b) r[std::size_t(b)] = complex_sqrt(t[std::size_t(b)], prec);
        t = borchardt_step(t, r);
    }
    throw NoConvergence("Borchardt mean did not converge");
}

BigComplex borchardt_mean_tracked(const Fundamentals& t_in, const BorchardtHints& hints, prec_t prec) {
    Fundamentals t;
    for (int b = 0; b < 8; ++b) t[std::size_t(b)] = t_in[std::size_t(b)].with_prec(prec);
    int good_run = 0;
    for (long it = 0; it < iteration_cap(prec); ++it) {
        if (converged(t, prec)) return t[0];
        Fundamentals r;
        for (int b = 0; b < 8; ++b) r[std::size_t(b)] = complex_sqrt(t[std::size_t(b)], prec);
        if (good_run < 2 && std::size_t(it) < hints.size()) {
            const Fundamentals& h = hints[std::size_t(it)];
            prec_t hp = h[0].prec();
            bool all_good = true;
            BigComplex inv0 = BigComplex(1L, prec) / r[0];
            for (int b = 1; b < 8; ++b) {
                BigComplex ratio = r[std::size_t(b)] * inv0;
                BigComplex hb = h[std::size_t(b)].with_prec(prec);
                BigFloat err = (abs(hb) + BigFloat(1L, prec)) * pow2(16 - long(hp), prec);
                BigFloat d1 = abs(ratio - hb), d2 = abs(ratio + hb);
                if (abs(d1 - d2) <= err * BigFloat(4L, prec))
                    throw AmbiguousSign("Borchardt square root hint does not separate the roots");
                if (d2 < d1) r[std::size_t(b)] = -r[std::size_t(b)];
                if (r[std::size_t(b)].re.sign() <= 0) all_good = false;
            }
            good_run = all_good ? good_run + 1 : 0;
        }
        t = borchardt_step(t, r);
    }
    throw NoConvergence("sign-tracked Borchardt mean did not converge");
}

BorchardtHints borchardt_hints(const RiemannMatrix& t, long hint_digits) {
    prec_t hb = digits_to_bits(hint_digits);
    BorchardtHints out;
    RiemannMatrix cur = lowered(t, hb + 64);
    int near_one = 0;
    for (int k = 0; k < 40 && near_one < 2; ++k) {
        Fundamentals f = theta_direct_fundamental(cur, hb);
        if (f[0].is_zero()) throw DegenerateThetas("theta_0 vanishes at a hint point");
        Fundamentals ratio;
        BigComplex inv = BigComplex(1L, hb) / f[0];
        bool close = true;
        for (int b = 0; b < 8; ++b) {
            ratio[std::size_t(b)] = f[std::size_t(b)] * inv;
            if (abs(ratio[std::size_t(b)] - BigComplex(1L, hb)).to_double() > 0.25) close = false;
        }
        out.push_back(ratio);
        near_one = close ? near_one + 1 : 0;
        cur = scaled(cur, 1);
    }
    return out;
}

const std::array<std::array<int, 8>, 7> kFLists = {{
    {32, 33, 34, 35, 0, 1, 2, 3},
    {16, 17, 0, 1, 20, 21, 4, 5},
    {8, 0, 10, 2, 12, 4, 14, 6},
    {0, 1, 32, 33, 16, 17, 48, 49},
    {0, 32, 2, 34, 8, 40, 10, 42},
    {0, 16, 8, 24, 4, 20, 12, 28},
    {0, 8, 16, 24, 32, 40, 48, 56},
}};

namespace {

ZMatrix partial_inversion(std::initializer_list<int> s) {
    ZMatrix m = zidentity(6);
    for (int i : s) {
        m(i, i) = 0;
        m(i + 3, i + 3) = 0;
        m(i, i + 3) = -1;
        m(i + 3, i) = 1;
    }
    return m;
}

ZMatrix diagonal_shift(int i) {
    ZMatrix m = zidentity(6);
    m(i, i + 3) = 1;
    return m;
}

// tau -> P tau P^T with P[i][p[i]] = 1
ZMatrix permutation(std::array<int, 3> p) {
    ZMatrix m(6, 6, mpz_class(0));
    for (int i = 0; i < 3; ++i) {
        m(i, p[std::size_t(i)]) = 1;
        m(i + 3, p[std::size_t(i)] + 3) = 1;
    }
    return m;
}

}  // namespace

std::array<SymplecticMatrix, 7> fmap_matrices() {
    return {zmul(diagonal_shift(2), partial_inversion({2})),
            zmul(diagonal_shift(1), partial_inversion({1})),
            zmul(diagonal_shift(0), partial_inversion({0})),
            zmul(permutation({0, 2, 1}), partial_inversion({1, 2})),
            zmul(permutation({2, 1, 0}), partial_inversion({0, 2})),
            zmul(permutation({1, 0, 2}), partial_inversion({0, 1})),
            partial_inversion({0, 1, 2})};
}

FHints make_fhints(const RiemannMatrix& tau, long hint_digits) {
    prec_t hb = digits_to_bits(hint_digits) + 64;
    FHints h;
    h.tau = lowered(tau, hb);
    h.at_tau = borchardt_hints(h.tau, hint_digits);
    h.fund = h.at_tau[0];
    RiemannMatrix two = scaled(h.tau, 1);
    auto ms = fmap_matrices();
    for (int j = 0; j < 7; ++j) h.lists[std::size_t(j)] = borchardt_hints(symplectic_act(ms[std::size_t(j)], two), hint_digits);
    return h;
}

FVector F_eval(const std::array<BigComplex, 7>& q, const FHints& hints, prec_t prec) {
    Fundamentals t;
    t[0] = BigComplex(1L, prec);
    for (int i = 0; i < 7; ++i) t[std::size_t(i + 1)] = q[std::size_t(i)].with_prec(prec);
    BigComplex t0 = borchardt_mean_tracked(t, hints.at_tau, prec);
    BigComplex inv_t0 = BigComplex(1L, prec) / t0;

    // fundamental thetas at tau, up to a common sign
    Fundamentals th;
    th[0] = complex_sqrt(inv_t0, prec);
    BigComplex inv0 = BigComplex(1L, prec) / th[0];
    for (int b = 1; b < 8; ++b) {
        BigComplex w = complex_sqrt(t[std::size_t(b)] * inv_t0, prec);
        BigComplex ratio = w * inv0;
        BigComplex h = hints.fund[std::size_t(b)].with_prec(prec);
        if (abs(ratio + h) < abs(ratio - h)) w = -w;
        th[std::size_t(b)] = w;
    }
    std::vector<BigComplex> sq2 = duplication_all_squares(th);

    FVector out;
    const long shifts[7] = {1, 1, 1, 2, 2, 2, 3};
    for (int j = 0; j < 7; ++j) {
        Fundamentals v;
        for (int b = 0; b < 8; ++b) v[std::size_t(b)] = sq2[std::size_t(kFLists[std::size_t(j)][std::size_t(b)])];
        BigComplex m = borchardt_mean_tracked(v, hints.lists[std::size_t(j)], prec);
        BigComplex r = BigComplex(1L, prec) / m;
        r.mul_2si(-shifts[j]);
        out[std::size_t(j)] = r;
    }
    return out;
}

FVector F_target(const RiemannMatrix& tau, prec_t prec) {
    CMatrix t = with_prec(tau.tau, prec);
    auto mi = [](const BigComplex& z) { return BigComplex(z.im, -z.re); };  // -i z
    FVector out;
    out[0] = mi(t(2, 2));
    out[1] = mi(t(1, 1));
    out[2] = mi(t(0, 0));
    out[3] = t(1, 2) * t(1, 2) - t(1, 1) * t(2, 2);
    out[4] = t(0, 2) * t(0, 2) - t(0, 0) * t(2, 2);
    out[5] = t(0, 1) * t(0, 1) - t(0, 0) * t(1, 1);
    out[6] = det3(t).times_i();
    return out;
}

ThetaVector theta_naive(const RiemannMatrix& tau, prec_t p_bits) {
    prec_t wp = p_bits + kGuardBits;
    RiemannMatrix half = scaled(RiemannMatrix(with_prec(tau.tau, wp), wp), -1);
    Fundamentals f = theta_naive_fundamental(half, wp);
    std::vector<BigComplex> sq = duplication_all_squares(f);
    ThetaVector tv = resolve_square_roots(sq, tau, 64);
    for (auto& v : tv.values) v.set_prec(p_bits);
    tv.prec = p_bits;
    return tv;
}

ThetaVector theta_fast(const RiemannMatrix& tau, prec_t p_bits) {
    check_riemann_matrix(tau);
    const prec_t p0 = digits_to_bits(450);
    prec_t wp = p_bits + kGuardBits;
    RiemannMatrix full(with_prec(tau.tau, wp), wp);
    RiemannMatrix half = scaled(full, -1);
    FHints hints = make_fhints(half);

    // seed with naive quotients
    prec_t cur = std::min(p0, wp);
    Fundamentals f = theta_naive_fundamental(RiemannMatrix(with_prec(half.tau, cur), cur), cur);
    std::array<BigComplex, 7> q;
    {
        BigComplex inv = BigComplex(1L, cur) / (f[0] * f[0]);
        for (int b = 1; b < 8; ++b) q[std::size_t(b - 1)] = f[std::size_t(b)] * f[std::size_t(b)] * inv;
    }

    int max_it = 4 + int(std::ceil(std::log2(std::max(1.0, double(wp) / double(p0)))));
    BigFloat goal = pow2(-long(p_bits) - 8, wp);
    for (int it = 0; it <= max_it; ++it) {
        prec_t next = std::min<prec_t>(2 * cur, wp);
        for (auto& x : q) x.set_prec(next);
        FVector target = F_target(half, next);
        FVector fq = F_eval(q, hints, next);
        CMatrix rhs(7, 1);
        BigFloat res(next);
        for (int k = 0; k < 7; ++k) {
            rhs(std::size_t(k), 0) = target[std::size_t(k)] - fq[std::size_t(k)];
            BigFloat a = absmax(rhs(std::size_t(k), 0));
            if (a > res) res = a;
        }
        if (cur == wp && res < goal) break;
        if (it == max_it) throw NoConvergence("Newton iteration on the Borchardt map did not converge");
        // central differences along the seven complex directions (the map is holomorphic)
        BigFloat h = pow2(-long(next) / 2, next);
        CMatrix jac(7, 7);
        for (int k = 0; k < 7; ++k) {
            std::array<BigComplex, 7> qp = q, qm = q;
            qp[std::size_t(k)].re += h;
            qm[std::size_t(k)].re -= h;
            FVector fp = F_eval(qp, hints, next), fm = F_eval(qm, hints, next);
            for (int r = 0; r < 7; ++r) {
                BigComplex d = fp[std::size_t(r)] - fm[std::size_t(r)];
                d.mul_2si(long(next) / 2 - 1);
                jac(std::size_t(r), std::size_t(k)) = d;
            }
        }
        CMatrix delta = solve(jac, rhs);
        for (int k = 0; k < 7; ++k) q[std::size_t(k)] += delta(std::size_t(k), 0);
        cur = next;
    }

    // recover the fundamentals at tau/2 and duplicate
    Fundamentals t;
    t[0] = BigComplex(1L, wp);
    for (int i = 0; i < 7; ++i) t[std::size_t(i + 1)] = q[std::size_t(i)];
    BigComplex inv_t0 = BigComplex(1L, wp) / borchardt_mean_tracked(t, hints.at_tau, wp);
    Fundamentals th;
    th[0] = complex_sqrt(inv_t0, wp);
    BigComplex inv0 = BigComplex(1L, wp) / th[0];
    for (int b = 1; b < 8; ++b) {
        BigComplex w = complex_sqrt(t[std::size_t(b)] * inv_t0, wp);
        BigComplex ratio = w * inv0;
        BigComplex hh = hints.fund[std::size_t(b)].with_prec(wp);
        if (abs(ratio + hh) < abs(ratio - hh)) w = -w;
        th[std::size_t(b)] = w;
    }
    std::vector<BigComplex> sq = duplication_all_squares(th);
    ThetaVector tv = resolve_square_roots(sq, tau, 64);
    for (auto& v : tv.values) v.set_prec(p_bits);
    tv.prec = p_bits;
    return tv;
}

}  // namespace cmq
