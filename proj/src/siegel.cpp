#include "cmq/siegel.hpp"

#include <algorithm>
#include <array>

namespace cmq {

ZMatrix omega3() {
    ZMatrix o(6, 6, mpz_class(0));
    for (int i = 0; i < 3; ++i) {
        o(i, i + 3) = 1;
        o(i + 3, i) = -1;
    }
    return o;
}

ZMatrix zmul(const ZMatrix& a, const ZMatrix& b) {
    ZMatrix c(a.rows(), b.cols(), mpz_class(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

static ZMatrix ztranspose(const ZMatrix& a) { return a.transpose(); }

bool is_symplectic(const ZMatrix& m) {
    if (m.rows() != 6 || m.cols() != 6) return false;
    ZMatrix o = omega3();
    ZMatrix r = zmul(zmul(ztranspose(m), o), m);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (r(i, j) != o(i, j)) return false;
    return true;
}

SymplecticMatrix symplectic_inverse(const SymplecticMatrix& m) {
    // M^-1 = Omega^-1 M^T Omega = -Omega M^T Omega
    ZMatrix o = omega3();
    ZMatrix r = zmul(zmul(o, ztranspose(m)), o);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) r(i, j) = -r(i, j);
    return r;
}

// Inverse of a unimodular 3x3 integer matrix via the adjugate.
static ZMatrix zinverse3(const ZMatrix& u) {
    mpz_class d = u(0, 0) * (u(1, 1) * u(2, 2) - u(1, 2) * u(2, 1)) - u(0, 1) * (u(1, 0) * u(2, 2) - u(1, 2) * u(2, 0)) +
                  u(0, 2) * (u(1, 0) * u(2, 1) - u(1, 1) * u(2, 0));
    if (d != 1 && d != -1) throw BadInput("matrix is not unimodular");
    ZMatrix r(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            r(i, j) = (u(i1, j1) * u(i2, j2) - u(i1, j2) * u(i2, j1)) * d;
        }
    return r;
}

SymplecticMatrix symplectic_from_unimodular(const ZMatrix& u) {
    ZMatrix m(6, 6, mpz_class(0));
    ZMatrix ui = zinverse3(u);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            m(i, j) = u(j, i);
            m(i + 3, j + 3) = ui(i, j);
        }
    return m;
}

bool is_positive_definite(const RMatrix& y) {
    const BigFloat& a = y(0, 0);
    if (a.sign() <= 0) return false;
    BigFloat m2 = y(0, 0) * y(1, 1) - y(0, 1) * y(1, 0);
    if (m2.sign() <= 0) return false;
    BigFloat m3 = y(0, 0) * (y(1, 1) * y(2, 2) - y(1, 2) * y(2, 1)) - y(0, 1) * (y(1, 0) * y(2, 2) - y(1, 2) * y(2, 0)) +
                  y(0, 2) * (y(1, 0) * y(2, 1) - y(1, 1) * y(2, 0));
    return m3.sign() > 0;
}

void check_riemann_matrix(const RiemannMatrix& t) {
    if (t.tau.rows() != 3 || t.tau.cols() != 3) throw BadInput("Riemann matrix must be 3x3");
    BigFloat scale = norm_inf(t.tau) + BigFloat(1L, t.prec);
    BigFloat tol = scale * pow2(10 - long(t.prec), t.prec);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (absmax(t.tau(i, j) - t.tau(j, i)) > tol) throw BadInput("Riemann matrix is not symmetric");
    if (!is_positive_definite(imag_part(t.tau))) throw NotPositiveDefinite("imaginary part is not positive definite");
}

static CMatrix symmetrize(CMatrix t) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            BigComplex m = t(i, j) + t(j, i);
            m.mul_2si(-1);
            t(i, j) = m;
            t(j, i) = m;
        }
    return t;
}

RiemannMatrix symplectic_act(const SymplecticMatrix& m, const RiemannMatrix& tau) {
    prec_t p = tau.prec;
    CMatrix mc = to_complex(m, p);
    CMatrix a = mc.block(0, 0, 3, 3), b = mc.block(0, 3, 3, 3), c = mc.block(3, 0, 3, 3), d = mc.block(3, 3, 3, 3);
    CMatrix t = with_prec(tau.tau, p);
    CMatrix num = a * t + b;
    CMatrix den = c * t + d;
    CMatrix r = num * mat3_inverse(den, p);
    return RiemannMatrix(symmetrize(r), p);
}

// ---- quadratic form reduction ----

static RMatrix congruence(const RMatrix& y, const ZMatrix& u) {
    prec_t p = y(0, 0).prec();
    RMatrix uf = to_real(u, p);
    RMatrix r = uf.transpose() * y * uf;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) r(j, i) = r(i, j);
    return r;
}

static prec_t decision_prec(const RMatrix& y) {
    prec_t p = y(0, 0).prec();
    return std::clamp<prec_t>(p, 64, 256);
}

static RMatrix lowered(const RMatrix& y, prec_t p) {
    RMatrix r(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = BigFloat(y(i, j), p);
    return r;
}

static void check_pd(const RMatrix& y) {
    if (y.rows() != 3 || y.cols() != 3) throw BadInput("form must be 3x3");
    if (!is_positive_definite(y)) throw NotPositiveDefinite("form is not positive definite");
}

namespace {

struct GramSchmidt {
    std::array<std::array<BigFloat, 3>, 3> mu;
    std::array<BigFloat, 3> b;
};

GramSchmidt gram_schmidt(const RMatrix& g) {
    GramSchmidt gs;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < i; ++j) {
            BigFloat s = g(i, j);
            for (int l = 0; l < j; ++l) s -= gs.mu[j][l] * gs.mu[i][l] * gs.b[l];
            gs.mu[i][j] = s / gs.b[j];
        }
        BigFloat s = g(i, i);
        for (int j = 0; j < i; ++j) s -= gs.mu[i][j] * gs.mu[i][j] * gs.b[j];
        gs.b[i] = s;
    }
    return gs;
}

void add_column(ZMatrix& u, int dst, int src, const mpz_class& f) {
    for (int r = 0; r < 3; ++r) u(r, dst) += f * u(r, src);
}

void swap_columns(ZMatrix& u, int a, int b) {
    for (int r = 0; r < 3; ++r) std::swap(u(r, a), u(r, b));
}

}  // namespace

static ZMatrix lll_transform(const RMatrix& y, double delta) {
    prec_t dp = decision_prec(y);
    RMatrix yl = lowered(y, dp);
    ZMatrix u = zidentity(3);
    BigFloat half(0.5, dp), dl(delta, dp);
    int k = 1;
    for (int guard = 0; k < 3; ++guard) {
        if (guard > 100000) throw PrecisionExhausted("LLL did not terminate");
        for (int j = k - 1; j >= 0; --j) {
            GramSchmidt gs = gram_schmidt(congruence(yl, u));
            if (abs(gs.mu[k][j]) > half) {
                mpz_class r = gs.mu[k][j].round_to_integer();
                add_column(u, k, j, -r);
            }
        }
        GramSchmidt gs = gram_schmidt(congruence(yl, u));
        if (gs.b[k] >= (dl - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.b[k - 1]) {
            ++k;
        } else {
            swap_columns(u, k, k - 1);
            k = std::max(k - 1, 1);
        }
    }
    return u;
}

FormReduction lll_reduce_imag(const RMatrix& y) {
    check_pd(y);
    ZMatrix u = lll_transform(y, 0.99);
    return {congruence(y, u), u};
}

static mpz_class gcd_tail(const std::array<long, 3>& v, int j) {
    mpz_class g = 0;
    for (int i = j; i < 3; ++i) g = gcd(g, mpz_class(v[i]));
    return g;
}

// Unimodular W with W v = e_j using only row operations that keep e_0..e_{j-1} fixed
// as columns of W^-1; returns W^-1 whose column j is v.
static ZMatrix complete_basis(const std::array<long, 3>& v, int j) {
    std::array<mpz_class, 3> w = {v[0], v[1], v[2]};
    ZMatrix winv = zidentity(3);  // maintained as the inverse of the accumulated row ops
    // row_k += m*row_l on w corresponds to col_l -= m*col_k on winv
    auto rowop = [&](int k, int l, const mpz_class& m) {
        w[k] += m * w[l];
        for (int r = 0; r < 3; ++r) winv(r, l) -= m * winv(r, k);
    };
    auto rowswap = [&](int k, int l) {
        std::swap(w[k], w[l]);
        swap_columns(winv, k, l);
    };
    // Euclid among rows j..2 until only row j is nonzero
    for (;;) {
        int piv = -1;
        for (int i = j; i < 3; ++i)
            if (w[i] != 0 && (piv < 0 || abs(w[i]) < abs(w[piv]))) piv = i;
        if (piv < 0) throw BadInput("zero vector cannot be completed");
        bool others = false;
        for (int i = j; i < 3; ++i)
            if (i != piv && w[i] != 0) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), w[i].get_mpz_t(), w[piv].get_mpz_t());
                rowop(i, piv, -q);
                if (w[i] != 0) others = true;
            }
        if (!others) {
            if (piv != j) rowswap(piv, j);
            break;
        }
    }
    if (w[j] < 0) {
        w[j] = -w[j];
        for (int r = 0; r < 3; ++r) winv(r, j) = -winv(r, j);
    }
    if (w[j] != 1) throw BadInput("vector tail is not primitive");
    for (int i = 0; i < j; ++i)
        if (w[i] != 0) rowop(i, j, -w[i]);
    return winv;
}

template <class F>
static void for_each_small_vector(int radius, F&& f) {
    std::array<long, 3> v{};
    for (v[0] = -radius; v[0] <= radius; ++v[0])
        for (v[1] = -radius; v[1] <= radius; ++v[1])
            for (v[2] = -radius; v[2] <= radius; ++v[2]) f(v);
}

static BigFloat qform(const RMatrix& y, const std::array<long, 3>& v) {
    BigFloat s(y(0, 0).prec());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (v[i] != 0 && v[j] != 0) s += y(i, j) * BigFloat(v[i] * v[j], y(0, 0).prec());
    return s;
}

FormReduction minkowski_reduce(const RMatrix& y) {
    check_pd(y);
    prec_t dp = decision_prec(y);
    RMatrix yl = lowered(y, dp);
    ZMatrix u = lll_transform(y, 0.99);
    BigFloat shrink = BigFloat(1L, dp) - pow2(-long(dp) / 2, dp);
    for (int guard = 0;; ++guard) {
        if (guard > 1000) throw PrecisionExhausted("Minkowski reduction did not settle");
        RMatrix g = congruence(yl, u);
        bool changed = false;
        for (int j = 0; j < 3 && !changed; ++j) {
            BigFloat best = g(j, j) * shrink;
            std::array<long, 3> bestv{};
            bool found = false;
            for_each_small_vector(3, [&](const std::array<long, 3>& v) {
                if (gcd_tail(v, j) != 1) return;
                BigFloat q = qform(g, v);
                if (q < best) {
                    best = q;
                    bestv = v;
                    found = true;
                }
            });
            if (found) {
                u = zmul(u, complete_basis(bestv, j));
                changed = true;
            }
        }
        if (!changed) break;
    }
    // sign conditions Y_{j,j+1} >= 0
    RMatrix g = congruence(yl, u);
    int s1 = 1, s2 = g(0, 1).sign() < 0 ? -1 : 1;
    int s3 = (g(1, 2).sign() < 0 ? -1 : 1) * s2;
    std::array<int, 3> s = {s1, s2, s3};
    for (int c = 0; c < 3; ++c)
        if (s[c] < 0)
            for (int r = 0; r < 3; ++r) u(r, c) = -u(r, c);
    return {congruence(y, u), u};
}

bool is_minkowski_reduced(const RMatrix& y, double slack) {
    prec_t p = y(0, 0).prec();
    BigFloat sl(slack, p);
    bool ok = true;
    for (int j = 0; j < 3 && ok; ++j) {
        BigFloat lim = y(j, j) * (BigFloat(1L, p) - sl);
        for_each_small_vector(3, [&](const std::array<long, 3>& v) {
            if (!ok || gcd_tail(v, j) != 1) return;
            if (qform(y, v) < lim) ok = false;
        });
    }
    if (!ok) return false;
    if (y(0, 1) < -(sl * y(0, 0))) return false;
    if (y(1, 2) < -(sl * y(1, 1))) return false;
    return true;
}

bool is_lll_reduced(const RMatrix& y, double delta, double slack) {
    prec_t p = y(0, 0).prec();
    GramSchmidt gs = gram_schmidt(y);
    BigFloat sl(slack, p);
    BigFloat half = BigFloat(0.5, p) + sl;
    for (int i = 1; i < 3; ++i)
        for (int j = 0; j < i; ++j)
            if (abs(gs.mu[i][j]) > half) return false;
    BigFloat dl = BigFloat(delta, p) - sl;
    for (int k = 1; k < 3; ++k)
        if (gs.b[k] < (dl - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.b[k - 1]) return false;
    return true;
}

BigFloat minkowski_constant(const RMatrix& y) {
    BigFloat c1 = y(0, 0) - y(0, 1) - abs(y(0, 2));
    BigFloat c2 = y(1, 1) - y(1, 0) - y(1, 2);
    BigFloat c3 = y(2, 2) - y(2, 1) - abs(y(2, 0));
    BigFloat c = c1;
    if (c2 < c) c = c2;
    if (c3 < c) c = c3;
    BigFloat alt = y(0, 0) / BigFloat(100L, y(0, 0).prec());
    return c < alt ? alt : c;
}

// ---- Siegel reduction ----

static SymplecticMatrix translation(const ZMatrix& b) {
    ZMatrix m = zidentity(6);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j + 3) = b(i, j);
    return m;
}

// tau_11 -> -1/tau_11 on the first slot
static SymplecticMatrix slot_one_inversion() {
    ZMatrix m(6, 6, mpz_class(0));
    m(1, 1) = m(2, 2) = m(4, 4) = m(5, 5) = 1;
    m(0, 3) = -1;
    m(3, 0) = 1;
    return m;
}

SiegelReduction siegel_reduce(const RiemannMatrix& tau_in, ReductionVariant variant) {
    check_riemann_matrix(tau_in);
    prec_t p = tau_in.prec;
    RiemannMatrix tau = tau_in;
    SymplecticMatrix m = zidentity(6);
    BigFloat thr(0.99, p);
    long cap = 10L * long(p);
    for (long it = 0;; ++it) {
        if (it > cap) throw PrecisionExhausted("Siegel reduction exceeded its iteration cap");
        RMatrix y = imag_part(tau.tau);
        FormReduction fr = variant == ReductionVariant::minkowski ? minkowski_reduce(y) : lll_reduce_imag(y);
        SymplecticMatrix mu = symplectic_from_unimodular(fr.u);
        CMatrix uc = to_complex(fr.u, p);
        tau.tau = symmetrize(uc.transpose() * tau.tau * uc);
        m = zmul(mu, m);

        ZMatrix b(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) b(i, j) = -tau.tau(i, j).re.round_to_integer();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) tau.tau(i, j).re += BigFloat(b(i, j), p);
        m = zmul(translation(b), m);

        if (abs(tau.tau(0, 0)) >= thr) break;
        SymplecticMatrix j1 = slot_one_inversion();
        tau = symplectic_act(j1, tau);
        m = zmul(j1, m);
    }
    if (!is_positive_definite(imag_part(tau.tau))) throw PrecisionExhausted("lost positivity during reduction");
    return {tau, m};
}

// ---- polarized lattices ----

mpz_class zdeterminant(ZMatrix a) {
    // Bareiss fraction-free elimination
    std::size_t n = a.rows();
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

ZMatrix symplectic_basis(const ZMatrix& gram) {
    if (gram.rows() != 6 || gram.cols() != 6) throw BadInput("gram must be 6x6");
    for (int i = 0; i < 6; ++i) {
        if (gram(i, i) != 0) throw BadInput("gram is not alternating");
        for (int j = 0; j < 6; ++j)
            if (gram(i, j) != -gram(j, i)) throw BadInput("gram is not alternating");
    }
    mpz_class d = zdeterminant(gram);
    if (d != 1) throw NotPrincipal("det(E) = " + d.get_str() + ", not a principal polarization");

    std::vector<std::array<mpz_class, 6>> vecs(6);
    for (int i = 0; i < 6; ++i)
        for (int r = 0; r < 6; ++r) vecs[i][r] = (r == i) ? 1 : 0;
    auto form = [&](const std::array<mpz_class, 6>& a, const std::array<mpz_class, 6>& b) {
        mpz_class s = 0;
        for (int i = 0; i < 6; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < 6; ++j)
                if (gram(i, j) != 0) s += a[i] * gram(i, j) * b[j];
        }
        return s;
    };
    auto axpy = [](std::array<mpz_class, 6>& y, const mpz_class& a, const std::array<mpz_class, 6>& x) {
        for (int i = 0; i < 6; ++i) y[i] += a * x[i];
    };

    std::vector<std::array<mpz_class, 6>> es, fs;
    std::vector<std::array<mpz_class, 6>> rest = vecs;
    while (!rest.empty()) {
        std::array<mpz_class, 6> e = rest.front();
        rest.erase(rest.begin());
        // Euclid on the values E(e, w)
        for (;;) {
            int piv = -1;
            mpz_class pv;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                mpz_class v = form(e, rest[i]);
                if (v != 0 && (piv < 0 || abs(v) < abs(pv))) {
                    piv = int(i);
                    pv = v;
                }
            }
            if (piv < 0) throw NotPrincipal("degenerate alternating form");
            bool others = false;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (int(i) == piv) continue;
                mpz_class v = form(e, rest[i]);
                if (v == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), v.get_mpz_t(), pv.get_mpz_t());
                axpy(rest[i], -q, rest[piv]);
                if (form(e, rest[i]) != 0) others = true;
            }
            if (!others) {
                if (abs(pv) != 1) throw NotPrincipal("elementary divisor " + mpz_class(abs(pv)).get_str());
                std::array<mpz_class, 6> f = rest[piv];
                if (pv < 0)
                    for (auto& x : f) x = -x;
                rest.erase(rest.begin() + piv);
                for (auto& v : rest) {
                    mpz_class vf = form(v, f), ve = form(v, e);
                    axpy(v, -vf, e);
                    axpy(v, ve, f);
                }
                es.push_back(e);
                fs.push_back(f);
                break;
            }
        }
    }
    ZMatrix u(6, 6);
    for (int k = 0; k < 3; ++k)
        for (int r = 0; r < 6; ++r) {
            u(r, k) = es[k][r];
            u(r, k + 3) = fs[k][r];
        }
    ZMatrix chk = zmul(zmul(u.transpose(), gram), u);
    ZMatrix o = omega3();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (chk(i, j) != o(i, j)) throw NotPrincipal("symplectic basis check failed");
    return u;
}

RiemannMatrix period_matrix(const PolarizedLattice& lat, prec_t prec) {
    if (lat.gens.rows() != 3 || lat.gens.cols() != 6) throw BadInput("lattice needs 3x6 generators");
    ZMatrix u = symplectic_basis(lat.gram);
    CMatrix pi = with_prec(lat.gens, prec) * to_complex(u, prec);
    CMatrix p1 = pi.block(0, 0, 3, 3), p2 = pi.block(0, 3, 3, 3);
    CMatrix t = mat3_inverse(p2, prec) * p1;
    RiemannMatrix r(t, prec);
    BigFloat scale = norm_inf(t) + BigFloat(1L, prec);
    BigFloat tol = scale * pow2(20 - long(prec) / 2, prec);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (absmax(t(i, j) - t(j, i)) > tol) throw NotPositive("period matrix is not symmetric; E is not a Riemann form");
    r.tau = symmetrize(t);
    if (!is_positive_definite(imag_part(r.tau))) throw NotPositive("imaginary part of the period matrix is not positive definite");
    return r;
}

}  // namespace cmq
