#include "cmq/cmfield.hpp"

#include <algorithm>

#include "cmq/data.hpp"

namespace cmq {

SexticCMField load_field(int case_id) {
    SexticCMField k;
    k.case_id = case_id;
    bool found = false;
    for (const auto& r : bundled("fields.json").at("fields")) {
        if (r.at("case").get<int>() != case_id) continue;
        found = true;
        k.d_k = r.at("d_k").get<long>();
        for (const auto& c : r.at("p_F")) k.p_F.emplace_back(c.get<long>());
        k.d_K = mpz_class(r.at("d_K").dump());
        k.h_star = r.at("h_star").get<int>();
    }
    if (!found) throw BadInput("no field row for case " + std::to_string(case_id));
    found = false;
    for (const auto& r : bundled("bases.json").at("fields")) {
        if (r.at("case").get<int>() != case_id) continue;
        found = true;
        for (const auto& c : r.at("p_K")) k.p_K.emplace_back(c.get<long>());
        k.basis = QMatrix(6, 6);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) k.basis(i, j) = parse_rational(r.at("basis").at(i).at(j).get<std::string>());
        for (std::size_t j = 0; j < 6; ++j) k.sqrt_d_k[j] = parse_rational(r.at("sqrt_d_k").at(j).get<std::string>());
        for (const auto& x : r.at("xi_candidates")) {
            std::array<mpq_class, 6> c;
            for (std::size_t j = 0; j < 6; ++j) c[j] = parse_rational(x.at("coords").at(j).get<std::string>());
            k.xi_candidates.push_back(c);
        }
    }
    if (!found) throw BadInput("no integral basis for case " + std::to_string(case_id));
    if (k.p_K.size() != 7 || k.p_F.size() != 4) throw BadInput("malformed field row");
    return k;
}

std::vector<int> bundled_field_cases() {
    std::vector<int> out;
    for (const auto& r : bundled("fields.json").at("fields")) out.push_back(r.at("case").get<int>());
    return out;
}

std::vector<BigComplex> embeddings(const SexticCMField& k, prec_t prec) {
    std::vector<mpq_class> c(k.p_K.begin(), k.p_K.end());
    std::vector<BigComplex> r = poly_roots(c, prec);
    for (auto& z : r)
        if (z.im.is_zero()) throw BadInput("p_K has a real root; not a CM field");
    // canonical order, independent of prec: upper root of each pair, sorted by
    // real part then imaginary part, each followed by its conjugate
    std::vector<BigComplex> upper;
    for (auto& z : r)
        if (z.im.sign() > 0) upper.push_back(z);
    if (upper.size() * 2 != r.size()) throw BadInput("roots of p_K do not pair up");
    BigFloat tie = pow2(-long(prec) / 2, prec);
    std::sort(upper.begin(), upper.end(), [&](const BigComplex& a, const BigComplex& b) {
        if (abs(a.re - b.re) > tie) return a.re < b.re;
        return a.im < b.im;
    });
    std::vector<BigComplex> out;
    for (auto& z : upper) {
        out.push_back(z);
        out.push_back(z.conj());
    }
    return out;
}

namespace {

// phi(b_j) for every root phi: vals[s][j]
std::vector<std::vector<BigComplex>> basis_values(const SexticCMField& k, const std::vector<BigComplex>& roots) {
    prec_t p = roots[0].prec();
    std::vector<std::vector<BigComplex>> vals(roots.size(), std::vector<BigComplex>(6, BigComplex(p)));
    for (std::size_t s = 0; s < roots.size(); ++s) {
        std::vector<BigComplex> pw(6, BigComplex(1L, p));
        for (std::size_t e = 1; e < 6; ++e) pw[e] = pw[e - 1] * roots[s];
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t e = 0; e < 6; ++e)
                if (sgn(k.basis(j, e))) vals[s][j] += pw[e] * BigFloat(k.basis(j, e), p);
    }
    return vals;
}

BigComplex value_at(const std::vector<BigComplex>& bvals, const std::array<mpq_class, 6>& coords) {
    prec_t p = bvals[0].prec();
    BigComplex v(p);
    for (std::size_t j = 0; j < 6; ++j)
        if (sgn(coords[j])) v += bvals[j] * BigFloat(coords[j], p);
    return v;
}

mpz_class round_checked(const BigFloat& x, const char* what) {
    mpz_class n = x.round_to_integer();
    if (abs(x - BigFloat(n, x.prec())) > BigFloat(1e-20, x.prec())) throw NotIntegral(std::string(what) + " is not integral");
    return n;
}

ZMatrix form_from_values(const std::vector<std::vector<BigComplex>>& vals, const std::vector<BigComplex>& xiv) {
    ZMatrix e(6, 6);
    prec_t p = xiv[0].prec();
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            BigComplex s(p);
            for (std::size_t r = 0; r < vals.size(); ++r) s += xiv[r] * vals[r][i] * vals[r][j].conj();
            if (abs(s.im) > BigFloat(1e-20, p)) throw NotIntegral("Riemann form entry is not real");
            e(i, j) = round_checked(s.re, "Riemann form entry");
        }
    return e;
}

// basis of the integer kernel {c : a c = 0}, by unimodular column operations
std::vector<std::vector<mpz_class>> integer_kernel(ZMatrix a) {
    std::size_t m = a.rows(), n = a.cols();
    ZMatrix u = zidentity(n);
    std::vector<bool> active(n, true);
    auto colop = [&](std::size_t dst, std::size_t src, const mpz_class& q) {
        for (std::size_t i = 0; i < m; ++i) a(i, dst) -= q * a(i, src);
        for (std::size_t i = 0; i < n; ++i) u(i, dst) -= q * u(i, src);
    };
    for (std::size_t r = 0; r < m; ++r) {
        for (;;) {
            std::size_t piv = n;
            int nonzero = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (!active[c] || a(r, c) == 0) continue;
                ++nonzero;
                if (piv == n || abs(a(r, c)) < abs(a(r, piv))) piv = c;
            }
            if (nonzero == 0) break;
            if (nonzero == 1) {
                active[piv] = false;
                break;
            }
            for (std::size_t c = 0; c < n; ++c) {
                if (!active[c] || c == piv || a(r, c) == 0) continue;
                mpz_class q;
                mpz_tdiv_q(q.get_mpz_t(), a(r, c).get_mpz_t(), a(r, piv).get_mpz_t());
                colop(c, piv, q);
            }
        }
    }
    std::vector<std::vector<mpz_class>> out;
    for (std::size_t c = 0; c < n; ++c) {
        if (!active[c]) continue;
        std::vector<mpz_class> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = u(i, c);
        out.push_back(v);
    }
    return out;
}

QMatrix q_inverse(QMatrix a) {
    std::size_t n = a.rows();
    QMatrix inv(n, n, mpq_class(0));
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && sgn(a(p, k)) == 0) ++p;
        if (p == n) throw SingularMatrix("singular rational matrix");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(k, j), a(p, j));
            std::swap(inv(k, j), inv(p, j));
        }
        mpq_class d = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= d;
            inv(k, j) /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || sgn(a(i, k)) == 0) continue;
            mpq_class f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

}  // namespace

ZMatrix riemann_form(const SexticCMField& k, const PolarizationElement& xi, prec_t prec) {
    std::vector<BigComplex> roots = embeddings(k, prec);
    auto vals = basis_values(k, roots);
    std::vector<BigComplex> xiv;
    for (auto& bv : vals) xiv.push_back(value_at(bv, xi.coords));
    return form_from_values(vals, xiv);
}

std::vector<Polarization> find_polarization(const SexticCMField& k, int search_radius, prec_t prec) {
    if (k.h_star != 1) throw UnsupportedClassNumber("h* = " + std::to_string(k.h_star) + " for case " + std::to_string(k.case_id));
    std::vector<BigComplex> roots = embeddings(k, prec);
    auto vals = basis_values(k, roots);
    std::size_t n = roots.size();

    // trace form and complex conjugation on the integral basis
    QMatrix t(6, 6), h(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            BigComplex s(prec), c(prec);
            for (std::size_t r = 0; r < n; ++r) {
                s += vals[r][i] * vals[r][j];
                c += vals[r][i].conj() * vals[r][j];
            }
            t(i, j) = mpq_class(round_checked(s.re, "trace form"));
            h(i, j) = mpq_class(round_checked(c.re, "conjugate trace form"));
        }
    QMatrix tinv = q_inverse(t);
    QMatrix conj = h * tinv;  // conj(b_i) = sum_j conj(i, j) b_j
    // xi = sum x_i b_i with T x = c integral; conj(xi) = -xi
    QMatrix cond = conj.transpose() * tinv + tinv;
    mpz_class den = 1;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) den = lcm(den, mpz_class(cond(i, j).get_den()));
    ZMatrix ci(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            mpq_class v = cond(i, j) * den;
            ci(i, j) = v.get_num();
        }
    auto kern = integer_kernel(ci);
    if (kern.size() != 3) throw BadInput("unexpected rank for the totally imaginary trace dual");

    std::vector<std::array<int, 3>> combos;
    int rr = search_radius;
    for (int a = -rr; a <= rr; ++a)
        for (int b = -rr; b <= rr; ++b)
            for (int c = -rr; c <= rr; ++c)
                if (a || b || c) combos.push_back({a, b, c});
    std::stable_sort(combos.begin(), combos.end(), [](const auto& x, const auto& y) {
        auto m = [](const std::array<int, 3>& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); };
        return m(x) < m(y);
    });

    std::vector<BigComplex> sq;
    {
        prec_t p = prec;
        for (std::size_t r = 0; r < n; ++r) {
            BigComplex v(p), pw(1L, p);
            for (std::size_t e = 0; e < 6; ++e) {
                if (sgn(k.sqrt_d_k[e])) v += pw * BigFloat(k.sqrt_d_k[e], p);
                pw = pw * roots[r];
            }
            sq.push_back(v);
        }
    }

    std::vector<Polarization> out;
    for (const auto& m : combos) {
        std::vector<mpz_class> c(6, mpz_class(0));
        for (std::size_t t3 = 0; t3 < 3; ++t3)
            for (std::size_t i = 0; i < 6; ++i) c[i] += m[t3] * kern[t3][i];
        PolarizationElement xi;
        for (std::size_t i = 0; i < 6; ++i) {
            mpq_class s = 0;
            for (std::size_t j = 0; j < 6; ++j) s += tinv(i, j) * c[j];
            xi.coords[i] = s;
        }
        std::vector<BigComplex> xiv;
        bool imaginary = true;
        for (auto& bv : vals) {
            xiv.push_back(value_at(bv, xi.coords));
            if (abs(xiv.back().re) >= abs(xiv.back()) * BigFloat(1e-20, prec)) imaginary = false;
        }
        if (!imaginary) continue;
        ZMatrix e = form_from_values(vals, xiv);
        if (abs(zdeterminant(e)) != 1) continue;
        Polarization pol;
        pol.xi = xi;
        pol.e = e;
        int cnt = 0, pos = 0;
        for (std::size_t r = 0; r < n; ++r)
            if (xiv[r].im.sign() > 0) {
                if (cnt < 3) pol.phi[std::size_t(cnt)] = int(r);
                ++cnt;
                if (sq[r].im.sign() > 0) ++pos;
            }
        if (cnt != 3) throw BadInput("CM type does not have three embeddings");
        pol.primitive = pos != 0 && pos != 3;
        out.push_back(pol);
    }
    if (out.empty()) throw NoneFound("no principal polarization within radius " + std::to_string(search_radius));
    return out;
}

PolarizedLattice cm_lattice(const SexticCMField& k, const PolarizationElement& xi, const CMType& phi, prec_t prec) {
    std::vector<BigComplex> roots = embeddings(k, prec);
    auto vals = basis_values(k, roots);
    PolarizedLattice lat;
    lat.gens = CMatrix(3, 6);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t j = 0; j < 6; ++j) lat.gens(r, j) = vals[std::size_t(phi[r])][j];
    std::vector<BigComplex> xiv;
    for (auto& bv : vals) xiv.push_back(value_at(bv, xi.coords));
    lat.gram = form_from_values(vals, xiv);
    // sign of E: whichever makes Im(tau) positive; a failure after negation propagates
    try {
        period_matrix(lat, prec);
    } catch (const NotPositive&) {
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) lat.gram(i, j) = -lat.gram(i, j);
        period_matrix(lat, prec);
    }
    return lat;
}

RiemannMatrix cm_period_matrix(const SexticCMField& k, prec_t prec, int search_radius) {
    auto pols = find_polarization(k, search_radius);
    auto it = std::find_if(pols.begin(), pols.end(), [](const Polarization& p) { return p.primitive; });
    if (it == pols.end()) throw NoneFound("no primitive CM type among the polarizations found");
    return period_matrix(cm_lattice(k, it->xi, it->phi, prec + 64), prec);
}

// ---- reduction types ----

namespace {

using ZPoly = std::vector<mpz_class>;  // constant term first, reduced mod p

void trim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly reduce(const ZPoly& a, const mpz_class& p) {
    ZPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        mpz_fdiv_r(r[i].get_mpz_t(), a[i].get_mpz_t(), p.get_mpz_t());
    }
    trim(r);
    return r;
}

ZPoly pmod(ZPoly a, const ZPoly& b, const mpz_class& p) {
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), b.back().get_mpz_t(), p.get_mpz_t());
    while (a.size() >= b.size()) {
        mpz_class f = a.back() * inv % p;
        std::size_t sh = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] = (a[sh + i] - f * b[i]) % p;
        for (auto& x : a)
            if (x < 0) x += p;
        trim(a);
    }
    return a;
}

ZPoly pmul(const ZPoly& a, const ZPoly& b, const mpz_class& p) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return reduce(r, p);
}

ZPoly pgcd(ZPoly a, ZPoly b, const mpz_class& p) {
    while (!b.empty()) {
        ZPoly r = pmod(a, b, p);
        a = b;
        b = r;
    }
    return a;
}

ZPoly pdiv(ZPoly a, const ZPoly& b, const mpz_class& p) {
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), b.back().get_mpz_t(), p.get_mpz_t());
    ZPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, mpz_class(0));
    while (a.size() >= b.size()) {
        mpz_class f = a.back() * inv % p;
        std::size_t sh = a.size() - b.size();
        q[sh] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] = (a[sh + i] - f * b[i]) % p;
        for (auto& x : a)
            if (x < 0) x += p;
        trim(a);
    }
    return q;
}

ZPoly ppowmod(ZPoly base, mpz_class e, const ZPoly& f, const mpz_class& p) {
    ZPoly r{mpz_class(1)};
    base = pmod(base, f, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = pmod(pmul(r, base, p), f, p);
        e >>= 1;
        if (e > 0) base = pmod(pmul(base, base, p), f, p);
    }
    return r;
}

}  // namespace

mpz_class poly_discriminant(const std::vector<mpz_class>& f) {
    std::size_t n = f.size() - 1;
    std::vector<mpz_class> d(n);
    for (std::size_t i = 1; i <= n; ++i) d[i - 1] = f[i] * mpz_class((unsigned long)i);
    // Sylvester matrix of f and f', coefficients high to low
    std::size_t m = n - 1, sz = n + m;
    ZMatrix s(sz, sz, mpz_class(0));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i <= n; ++i) s(r, r + i) = f[n - i];
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i <= m; ++i) s(m + r, r + i) = d[m - i];
    mpz_class res = zdeterminant(s);
    mpz_class disc = res / f[n];
    if ((n * (n - 1) / 2) % 2) disc = -disc;
    return disc;
}

int factor_count_mod_p(const std::vector<mpz_class>& f_in, const mpz_class& p) {
    ZPoly f = reduce(f_in, p);
    if (f.size() < 2) throw BadInput("polynomial degenerates modulo p");
    int count = 0;
    ZPoly x{mpz_class(0), mpz_class(1)};
    ZPoly h = x;
    for (int d = 1; 2 * d <= int(f.size()) - 1; ++d) {
        h = ppowmod(h, p, f, p);
        ZPoly diff = h;
        diff.resize(std::max<std::size_t>(diff.size(), 2), mpz_class(0));
        diff[1] -= 1;
        diff = reduce(diff, p);
        ZPoly g = pgcd(f, diff, p);
        int dg = int(g.size()) - 1;
        if (dg > 0) {
            count += dg / d;
            f = pdiv(f, g, p);
            h = pmod(h, f, p);
        }
    }
    if (f.size() > 1) count += 1;
    return count;
}

ReductionType classify_reduction(const SexticCMField& k, const mpz_class& p) {
    if (p < 2 || !mpz_probab_prime_p(p.get_mpz_t(), 30)) throw NotPrime(p.get_str() + " is not prime");
    mpz_class disc = poly_discriminant(k.p_K);
    if (mpz_divisible_p(disc.get_mpz_t(), p.get_mpz_t())) throw Ramified(p.get_str() + " divides disc(p_K)");
    ReductionType t;
    t.n = factor_count_mod_p(k.p_K, p);
    if (t.n == 2) {
        t.d = 1;
        t.simple = true;
        t.algebra = "central division algebra of reduced degree 3 over the imaginary quadratic subfield";
    } else if (t.n == 6) {
        t.d = 1;
        t.simple = true;
        t.algebra = "K";
    } else {
        t.d = 3;
        t.supersingular = true;
        t.algebra = "M3(B_{p,inf})";
    }
    return t;
}

}  // namespace cmq
