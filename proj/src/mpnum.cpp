#include "cmq/mpnum.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace cmq {

prec_t digits_to_bits(long digits) {
    return prec_t(std::ceil(double(digits) * 3.3219280948873623));
}

long bits_to_digits(prec_t bits) { return long(double(bits) * 0.30102999566398120); }

BigFloat::BigFloat(prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(long v, prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(double v, prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const mpz_class& v, prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const mpq_class& v, prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& o) {
    mpfr_init2(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
}

BigFloat::BigFloat(const BigFloat& o, prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat& BigFloat::operator=(const BigFloat& o) {
    if (this == &o) return *this;
    if (prec() != o.prec()) mpfr_set_prec(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

BigFloat BigFloat::parse(const std::string& s, prec_t prec) {
    BigFloat r(prec);
    if (s.find('/') != std::string::npos) {
        mpq_class q(s);
        q.canonicalize();
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    char* end = nullptr;
    if (mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN), end == s.c_str() || *end != '\0')
        throw BadInput("cannot parse number '" + s + "'");
    return r;
}

BigFloat BigFloat::pi(prec_t prec) {
    BigFloat r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::log2(prec_t prec) {
    BigFloat r(prec);
    mpfr_const_log2(r.v_, MPFR_RNDN);
    return r;
}

void BigFloat::set_prec(prec_t prec) {
    if (prec == this->prec()) return;
    mpfr_prec_round(v_, prec, MPFR_RNDN);
}

long BigFloat::exponent() const {
    if (mpfr_zero_p(v_)) return -(1L << 40);
    return mpfr_get_exp(v_);
}

std::string BigFloat::to_string(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    if (digits < 1) digits = 1;
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, size_t(digits), v_, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    std::string out;
    if (m[0] == '-') {
        out = "-";
        m.erase(0, 1);
    }
    // trailing zeros carry no information
    while (m.size() > 1 && m.back() == '0') m.pop_back();
    out += m.substr(0, 1);
    if (m.size() > 1) out += "." + m.substr(1);
    if (e - 1 != 0) out += "e" + std::to_string(long(e) - 1);
    return out;
}

mpz_class BigFloat::round_to_integer() const {
    if (!is_finite()) throw PrecisionExhausted("rounding a non-finite value");
    mpz_class z;
    BigFloat t(*this);
    mpfr_round(t.v_, t.v_);
    mpfr_get_z(z.get_mpz_t(), t.v_, MPFR_RNDN);
    return z;
}

mpq_class BigFloat::to_rational() const {
    if (!is_finite()) throw PrecisionExhausted("non-finite value");
    if (is_zero()) return 0;
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    mpq_class q(m);
    if (e >= 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), mp_bitcnt_t(e));
    else
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), mp_bitcnt_t(-e));
    return q;
}

BigFloat BigFloat::operator-() const {
    BigFloat r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

// In-place updates keep the larger of the two precisions.
static void grow(BigFloat& a, const BigFloat& b) {
    if (b.prec() > a.prec()) a.set_prec(b.prec());
}

BigFloat& BigFloat::operator+=(const BigFloat& o) {
    grow(*this, o);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
    grow(*this, o);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
    grow(*this, o);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
    grow(*this, o);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
BigFloat& BigFloat::mul_2si(long e) {
    mpfr_mul_2si(v_, v_, e, MPFR_RNDN);
    return *this;
}

static prec_t pmax(const BigFloat& a, const BigFloat& b) { return std::max(a.prec(), b.prec()); }

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(pmax(a, b));
    mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(pmax(a, b));
    mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(pmax(a, b));
    mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(pmax(a, b));
    mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.get(), b.get()); }
bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.get(), b.get()); }
bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.get(), b.get()); }
bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.get(), b.get()); }
bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.get(), b.get()); }

#define CMQ_UNARY(name, fn)                          \
    BigFloat name(const BigFloat& x) {               \
        BigFloat r(x.prec());                        \
        fn(r.get(), x.get(), MPFR_RNDN);             \
        return r;                                    \
    }
CMQ_UNARY(abs, mpfr_abs)
CMQ_UNARY(sqrt, mpfr_sqrt)
CMQ_UNARY(exp, mpfr_exp)
CMQ_UNARY(log, mpfr_log)
CMQ_UNARY(cos, mpfr_cos)
CMQ_UNARY(sin, mpfr_sin)
#undef CMQ_UNARY

BigFloat floor(const BigFloat& x) {
    BigFloat r(x.prec());
    mpfr_floor(r.get(), x.get());
    return r;
}

BigFloat atan2(const BigFloat& y, const BigFloat& x) {
    BigFloat r(pmax(y, x));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}

BigFloat pow2(long e, prec_t prec) {
    BigFloat r(1L, prec);
    r.mul_2si(e);
    return r;
}

// ---- complex ----

BigComplex& BigComplex::operator+=(const BigComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
}
BigComplex& BigComplex::operator-=(const BigComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}
BigComplex& BigComplex::operator*=(const BigComplex& o) {
    *this = *this * o;
    return *this;
}
BigComplex& BigComplex::operator/=(const BigComplex& o) {
    *this = *this / o;
    return *this;
}
BigComplex& BigComplex::operator*=(const BigFloat& o) {
    re *= o;
    im *= o;
    return *this;
}
BigComplex& BigComplex::mul_2si(long e) {
    re.mul_2si(e);
    im.mul_2si(e);
    return *this;
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re + b.re, a.im + b.im);
}
BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re - b.re, a.im - b.im);
}

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    prec_t p = std::max(a.prec(), b.prec());
    BigComplex r(p);
    BigFloat t(p);
    mul_into(r, a, b, t);
    return r;
}

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat n = norm(b);
    BigComplex r = a * b.conj();
    r.re /= n;
    r.im /= n;
    return r;
}

BigComplex operator*(const BigComplex& a, const BigFloat& b) { return BigComplex(a.re * b, a.im * b); }
BigComplex operator*(const BigFloat& a, const BigComplex& b) { return BigComplex(a * b.re, a * b.im); }

void mul_into(BigComplex& out, const BigComplex& a, const BigComplex& b, BigFloat& t) {
    // out may alias neither a nor b
    if (&out == &a || &out == &b) {
        BigComplex tmp(out.prec());
        mul_into(tmp, a, b, t);
        swap(out, tmp);
        return;
    }
    mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_fms(out.re.get(), a.re.get(), b.re.get(), t.get(), MPFR_RNDN);
    mpfr_mul(t.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_fma(out.im.get(), a.re.get(), b.im.get(), t.get(), MPFR_RNDN);
}

void addmul_into(BigComplex& acc, const BigComplex& a, const BigComplex& b, BigFloat& t1, BigFloat& t2) {
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_add(acc.re.get(), acc.re.get(), t1.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_add(acc.im.get(), acc.im.get(), t1.get(), MPFR_RNDN);
}

BigFloat norm(const BigComplex& z) {
    BigFloat r(z.prec());
    BigFloat t(z.prec());
    mpfr_sqr(r.get(), z.re.get(), MPFR_RNDN);
    mpfr_sqr(t.get(), z.im.get(), MPFR_RNDN);
    mpfr_add(r.get(), r.get(), t.get(), MPFR_RNDN);
    return r;
}

BigFloat abs(const BigComplex& z) {
    BigFloat r(z.prec());
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return r;
}

BigFloat arg(const BigComplex& z) { return atan2(z.im, z.re); }

BigFloat absmax(const BigComplex& z) {
    BigFloat a = abs(z.re), b = abs(z.im);
    return a < b ? b : a;
}

BigComplex exp(const BigComplex& z) {
    prec_t p = z.prec();
    BigFloat m = exp(z.re);
    BigFloat s(p), c(p);
    mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
    return BigComplex(m * c, m * s);
}

BigComplex log(const BigComplex& z) { return BigComplex(log(abs(z)), arg(z)); }

BigComplex exp_pi_i(const BigComplex& z) {
    prec_t p = z.prec();
    BigFloat pi = BigFloat::pi(p);
    BigFloat m = exp(-(pi * z.im));
    BigFloat ang = pi * z.re;
    BigFloat s(p), c(p);
    mpfr_sin_cos(s.get(), c.get(), ang.get(), MPFR_RNDN);
    return BigComplex(m * c, m * s);
}

BigComplex complex_sqrt(const BigComplex& z, prec_t prec) {
    BigComplex w(prec);
    if (z.is_zero()) return w;
    prec_t wp = prec + 8;
    BigComplex zz(z, wp);
    BigFloat t = abs(zz);
    t += abs(zz.re);
    t.mul_2si(-1);
    t = sqrt(t);
    // t = sqrt((|z| + |Re z|)/2) is the larger of |Re w|, |Im w|
    BigFloat other = abs(zz.im) / t;
    other.mul_2si(-1);
    if (zz.re.sign() >= 0) {
        w.re = BigFloat(t, prec);
        w.im = BigFloat(other, prec);
        if (zz.im.sign() < 0) w.im = -w.im;
    } else {
        w.re = BigFloat(other, prec);
        w.im = BigFloat(t, prec);
        if (zz.im.sign() < 0) w.im = -w.im;
    }
    return w;
}

// ---- matrices ----

CMatrix cidentity(std::size_t n, prec_t prec) {
    CMatrix m(n, n, BigComplex(prec));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = BigComplex(1L, prec);
    return m;
}

ZMatrix zidentity(std::size_t n) {
    ZMatrix m(n, n, mpz_class(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RMatrix real_part(const CMatrix& m) {
    RMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).re;
    return r;
}

RMatrix imag_part(const CMatrix& m) {
    RMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).im;
    return r;
}

CMatrix to_complex(const RMatrix& re, const RMatrix& im) {
    CMatrix c(re.rows(), re.cols());
    for (std::size_t i = 0; i < re.rows(); ++i)
        for (std::size_t j = 0; j < re.cols(); ++j) c(i, j) = BigComplex(re(i, j), im(i, j));
    return c;
}

CMatrix to_complex(const ZMatrix& m, prec_t prec) {
    CMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = BigComplex(BigFloat(m(i, j), prec), BigFloat(prec));
    return c;
}

RMatrix to_real(const ZMatrix& m, prec_t prec) {
    RMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = BigFloat(m(i, j), prec);
    return c;
}

CMatrix with_prec(const CMatrix& m, prec_t prec) {
    CMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = BigComplex(m(i, j), prec);
    return c;
}

BigFloat norm_inf(const CMatrix& m) {
    BigFloat r(m(0, 0).prec());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            BigFloat a = absmax(m(i, j));
            if (a > r) r = a;
        }
    return r;
}

BigFloat norm_inf(const RMatrix& m) {
    BigFloat r(m(0, 0).prec());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            BigFloat a = abs(m(i, j));
            if (a > r) r = a;
        }
    return r;
}

template <class T>
static T det3_impl(const Matrix<T>& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

BigComplex det3(const CMatrix& m) { return det3_impl(m); }

template <class T>
static Matrix<T> inverse3_impl(const Matrix<T>& m, prec_t prec, const BigFloat& absdet, const BigFloat& rows) {
    T d = det3_impl(m);
    BigFloat thr = rows * pow2(-long(prec) / 2, prec);
    if (absdet <= thr) throw SingularMatrix("3x3 determinant below threshold");
    Matrix<T> r(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            r(i, j) = (m(i1, j1) * m(i2, j2) - m(i1, j2) * m(i2, j1)) / d;
        }
    return r;
}

CMatrix mat3_inverse(const CMatrix& m, prec_t prec) {
    CMatrix mm = with_prec(m, prec);
    BigFloat rows(1L, prec);
    for (int i = 0; i < 3; ++i) {
        BigFloat s(prec);
        for (int j = 0; j < 3; ++j) s += abs(mm(i, j));
        rows *= s;
    }
    BigFloat ad = abs(det3_impl(mm));
    return inverse3_impl(mm, prec, ad, rows);
}

RMatrix mat3_inverse(const RMatrix& m, prec_t prec) {
    RMatrix mm(3, 3);
    BigFloat rows(1L, prec);
    for (int i = 0; i < 3; ++i) {
        BigFloat s(prec);
        for (int j = 0; j < 3; ++j) {
            mm(i, j) = BigFloat(m(i, j), prec);
            s += abs(mm(i, j));
        }
        rows *= s;
    }
    BigFloat ad = abs(det3_impl(mm));
    return inverse3_impl(mm, prec, ad, rows);
}

CMatrix solve(CMatrix a, CMatrix b) {
    std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        BigFloat best = absmax(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            BigFloat v = absmax(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best.is_zero()) throw SingularMatrix("zero pivot");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) swap(a(k, j), a(piv, j));
            for (std::size_t j = 0; j < b.cols(); ++j) swap(b(k, j), b(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            BigComplex f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (std::size_t c = 0; c < b.cols(); ++c)
        for (std::size_t ii = n; ii-- > 0;) {
            BigComplex s = b(ii, c);
            for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * b(j, c);
            b(ii, c) = s / a(ii, ii);
        }
    return b;
}

BigComplex determinant(CMatrix a) {
    std::size_t n = a.rows();
    BigComplex d(1L, a(0, 0).prec());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        BigFloat best = absmax(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            BigFloat v = absmax(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best.is_zero()) return BigComplex(a(0, 0).prec());
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) swap(a(k, j), a(piv, j));
            d = -d;
        }
        d *= a(k, k);
        BigComplex inv = BigComplex(1L, a(k, k).prec()) / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k).is_zero()) continue;
            BigComplex f = a(i, k) * inv;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return d;
}

// ---- polynomial roots ----

namespace {

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly poly_rem(QPoly a, const QPoly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        mpq_class f = a.back() / b.back();
        std::size_t sh = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] -= f * b[i];
        trim(a);
    }
    return a;
}

std::size_t gcd_degree(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? 0 : a.size() - 1;
}

struct Evaluated {
    BigComplex p, dp;
};

Evaluated horner(const std::vector<BigFloat>& c, const BigComplex& z) {
    prec_t pr = z.prec();
    BigComplex p(BigFloat(c.back(), pr), BigFloat(pr));
    BigComplex dp(pr);
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        dp = dp * z + p;
        p = p * z;
        p.re += c[k];
    }
    return {p, dp};
}

}  // namespace

std::vector<BigComplex> poly_roots(const std::vector<mpq_class>& coeffs_in, prec_t prec) {
    QPoly q = coeffs_in;
    trim(q);
    if (q.size() < 2) throw BadInput("polynomial of degree < 1");
    std::size_t n = q.size() - 1;
    if (n > 6) throw BadInput("poly_roots handles degree <= 6");
    QPoly dq(n);
    for (std::size_t k = 1; k <= n; ++k) dq[k - 1] = q[k] * mpq_class(long(k));
    if (gcd_degree(q, dq) > 0) throw NotSquarefree("repeated root");

    // monic, as floats
    auto coeffs_at = [&](prec_t p) {
        std::vector<BigFloat> c;
        for (auto& v : q) c.emplace_back(mpq_class(v / q.back()), p);
        return c;
    };

    // Aberth at a modest working precision
    prec_t p0 = 128;
    std::vector<BigFloat> c0 = coeffs_at(p0);
    double bound = 0;
    for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::pow(std::fabs(c0[k].to_double()), 1.0 / double(n - k)));
    bound = 2 * bound + 1e-3;
    std::vector<BigComplex> z;
    for (std::size_t k = 0; k < n; ++k) {
        double a = 2 * M_PI * double(k) / double(n) + 0.4;
        double r = bound * (0.5 + 0.07 * double(k));
        z.emplace_back(BigFloat(r * std::cos(a), p0), BigFloat(r * std::sin(a), p0));
    }
    BigFloat tol = pow2(-110, p0);
    for (int it = 0; it < 1000; ++it) {
        BigFloat worst(p0);
        for (std::size_t k = 0; k < n; ++k) {
            Evaluated e = horner(c0, z[k]);
            if (e.p.is_zero()) continue;
            BigComplex ratio = e.p / e.dp;
            BigComplex s(p0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) s += BigComplex(1L, p0) / (z[k] - z[j]);
            BigComplex w = ratio / (BigComplex(1L, p0) - ratio * s);
            z[k] -= w;
            BigFloat m = absmax(w) / (absmax(z[k]) + BigFloat(1L, p0));
            if (m > worst) worst = m;
        }
        if (worst < tol) break;
    }

    // Newton refinement with doubling precision
    prec_t target = prec + 32;
    prec_t cur = p0;
    while (cur < target) {
        cur = std::min(target, 2 * cur);
        std::vector<BigFloat> c = coeffs_at(cur);
        for (auto& r : z) {
            r.set_prec(cur);
            for (int k = 0; k < 3; ++k) {
                Evaluated e = horner(c, r);
                if (e.dp.is_zero()) break;
                r -= e.p / e.dp;
            }
        }
    }

    // real roots exactly on the axis, conjugates exactly paired
    std::vector<BigComplex> reals, upper;
    BigFloat realtol = pow2(-long(prec) / 2, target);
    for (auto& r : z) {
        if (abs(r.im) <= realtol * (abs(r) + BigFloat(1L, target))) {
            reals.push_back(BigComplex(r.re));
        } else if (r.im.sign() > 0) {
            upper.push_back(r);
        }
    }
    if (reals.size() + 2 * upper.size() != n) throw PrecisionExhausted("root pairing failed");
    std::sort(reals.begin(), reals.end(), [](const BigComplex& a, const BigComplex& b) { return a.re < b.re; });
    std::sort(upper.begin(), upper.end(), [](const BigComplex& a, const BigComplex& b) { return a.re < b.re; });
    std::vector<BigComplex> out;
    for (auto& r : reals) out.push_back(r.with_prec(prec));
    for (auto& r : upper) {
        BigComplex u = r.with_prec(prec);
        out.push_back(u);
        out.push_back(u.conj());
    }
    return out;
}

mpq_class parse_rational(const std::string& s_in) {
    std::string s = s_in;
    s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
    if (s.empty()) throw BadInput("empty rational");
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg) ip.erase(0, 1);
        if (ip.empty()) ip = "0";
        mpz_class num, den;
        if (num.set_str(ip + fp, 10) != 0) throw BadInput("cannot parse rational '" + s_in + "'");
        mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
        mpq_class q(num, den);
        q.canonicalize();
        return neg ? mpq_class(-q) : q;
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw BadInput("cannot parse rational '" + s_in + "'");
    if (q.get_den() == 0) throw BadInput("zero denominator in '" + s_in + "'");
    q.canonicalize();
    return q;
}

}  // namespace cmq
