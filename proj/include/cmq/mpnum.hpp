#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cmq/errors.hpp"

namespace cmq {

using prec_t = mpfr_prec_t;

// Bits needed for the given number of decimal digits.
prec_t digits_to_bits(long digits);
long bits_to_digits(prec_t bits);

// A real number stored at its own binary precision.  Binary operators round
// to the larger of the two input precisions.
class BigFloat {
public:
    BigFloat() : BigFloat(prec_t(64)) {}
    explicit BigFloat(prec_t prec);
    BigFloat(long v, prec_t prec);
    BigFloat(double v, prec_t prec);
    BigFloat(const mpz_class& v, prec_t prec);
    BigFloat(const mpq_class& v, prec_t prec);
    BigFloat(const BigFloat& o);
    BigFloat(BigFloat&& o) noexcept;
    BigFloat(const BigFloat& o, prec_t prec);
    ~BigFloat();

    // Adopts the precision of the right-hand side.
    BigFloat& operator=(const BigFloat& o);
    BigFloat& operator=(BigFloat&& o) noexcept;

    static BigFloat parse(const std::string& s, prec_t prec);
    static BigFloat pi(prec_t prec);
    static BigFloat log2(prec_t prec);

    prec_t prec() const { return mpfr_get_prec(v_); }
    // Change precision keeping the value (rounded).
    void set_prec(prec_t prec);
    BigFloat with_prec(prec_t prec) const { return BigFloat(*this, prec); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long exponent() const;  // e with 2^(e-1) <= |x| < 2^e; very negative for 0
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }

    // Decimal scientific notation with the given number of significant digits.
    std::string to_string(int digits) const;
    // enough digits to read back the same binary value
    std::string to_string() const { return to_string(int(std::ceil(double(prec()) * 0.30102999566398120)) + 1); }

    mpz_class round_to_integer() const;
    mpq_class to_rational() const;  // exact value of the binary float

    BigFloat operator-() const;
    BigFloat& operator+=(const BigFloat& o);
    BigFloat& operator-=(const BigFloat& o);
    BigFloat& operator*=(const BigFloat& o);
    BigFloat& operator/=(const BigFloat& o);
    BigFloat& mul_2si(long e);

    friend void swap(BigFloat& a, BigFloat& b) noexcept { mpfr_swap(a.v_, b.v_); }

private:
    mpfr_t v_;
};

BigFloat operator+(const BigFloat& a, const BigFloat& b);
BigFloat operator-(const BigFloat& a, const BigFloat& b);
BigFloat operator*(const BigFloat& a, const BigFloat& b);
BigFloat operator/(const BigFloat& a, const BigFloat& b);
bool operator<(const BigFloat& a, const BigFloat& b);
bool operator>(const BigFloat& a, const BigFloat& b);
bool operator<=(const BigFloat& a, const BigFloat& b);
bool operator>=(const BigFloat& a, const BigFloat& b);
bool operator==(const BigFloat& a, const BigFloat& b);

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat cos(const BigFloat& x);
BigFloat sin(const BigFloat& x);
BigFloat atan2(const BigFloat& y, const BigFloat& x);
BigFloat floor(const BigFloat& x);
// 2^e at the given precision
BigFloat pow2(long e, prec_t prec);

class BigComplex {
public:
    BigFloat re, im;

    BigComplex() = default;
    explicit BigComplex(prec_t prec) : re(prec), im(prec) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    BigComplex(const BigFloat& r) : re(r), im(r.prec()) {}
    BigComplex(long r, prec_t prec) : re(r, prec), im(prec) {}
    BigComplex(const mpq_class& r, prec_t prec) : re(r, prec), im(prec) {}
    BigComplex(const BigComplex& o, prec_t prec) : re(o.re, prec), im(o.im, prec) {}

    static BigComplex i(prec_t prec) { return BigComplex(BigFloat(prec), BigFloat(1L, prec)); }

    prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
    void set_prec(prec_t prec) { re.set_prec(prec); im.set_prec(prec); }
    BigComplex with_prec(prec_t prec) const { return BigComplex(*this, prec); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    BigComplex conj() const { return BigComplex(re, -im); }
    BigComplex operator-() const { return BigComplex(-re, -im); }
    BigComplex& operator+=(const BigComplex& o);
    BigComplex& operator-=(const BigComplex& o);
    BigComplex& operator*=(const BigComplex& o);
    BigComplex& operator/=(const BigComplex& o);
    BigComplex& operator*=(const BigFloat& o);
    BigComplex& mul_2si(long e);
    // multiply by i
    BigComplex times_i() const { return BigComplex(-im, re); }

    friend void swap(BigComplex& a, BigComplex& b) noexcept {
        swap(a.re, b.re);
        swap(a.im, b.im);
    }
};

BigComplex operator+(const BigComplex& a, const BigComplex& b);
BigComplex operator-(const BigComplex& a, const BigComplex& b);
BigComplex operator*(const BigComplex& a, const BigComplex& b);
BigComplex operator/(const BigComplex& a, const BigComplex& b);
BigComplex operator*(const BigComplex& a, const BigFloat& b);
BigComplex operator*(const BigFloat& a, const BigComplex& b);

// |z|^2 and |z|
BigFloat norm(const BigComplex& z);
BigFloat abs(const BigComplex& z);
BigFloat arg(const BigComplex& z);
BigComplex exp(const BigComplex& z);
BigComplex log(const BigComplex& z);
// exp(i*pi*z), the common building block for theta series.
BigComplex exp_pi_i(const BigComplex& z);
// Mixed-norm size: max(|re|, |im|).  Cheap comparison proxy.
BigFloat absmax(const BigComplex& z);

// Principal branch: Re(w) >= 0, and Im(w) >= 0 when Re(w) = 0.
BigComplex complex_sqrt(const BigComplex& z, prec_t prec);

// out = a*b using the scratch t (same precision as out).  No allocation.
void mul_into(BigComplex& out, const BigComplex& a, const BigComplex& b, BigFloat& t);
// acc += a*b
void addmul_into(BigComplex& acc, const BigComplex& a, const BigComplex& b, BigFloat& t1, BigFloat& t2);

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}
    Matrix(std::size_t r, std::size_t c, const T& fill) : rows_(r), cols_(c), a_(r * c, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    Matrix block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const {
        Matrix b(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            T s = a(i, 0) * b(0, j);
            for (std::size_t k = 1; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
    return c;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
    return c;
}

using RMatrix = Matrix<BigFloat>;
using CMatrix = Matrix<BigComplex>;
using ZMatrix = Matrix<mpz_class>;
using QMatrix = Matrix<mpq_class>;

CMatrix cidentity(std::size_t n, prec_t prec);
ZMatrix zidentity(std::size_t n);
RMatrix real_part(const CMatrix& m);
RMatrix imag_part(const CMatrix& m);
CMatrix to_complex(const RMatrix& re, const RMatrix& im);
CMatrix to_complex(const ZMatrix& m, prec_t prec);
RMatrix to_real(const ZMatrix& m, prec_t prec);
CMatrix with_prec(const CMatrix& m, prec_t prec);
// max-entry norm, max(|re|,|im|) per entry
BigFloat norm_inf(const CMatrix& m);
BigFloat norm_inf(const RMatrix& m);

BigComplex det3(const CMatrix& m);
// Raises SingularMatrix when |det| < 2^(-prec/2) times the product of row norms.
CMatrix mat3_inverse(const CMatrix& m, prec_t prec);
RMatrix mat3_inverse(const RMatrix& m, prec_t prec);
// Gaussian elimination with partial pivoting; SingularMatrix on a zero pivot.
CMatrix solve(CMatrix a, CMatrix b);
BigComplex determinant(CMatrix a);

// Roots of a squarefree rational polynomial of degree <= 6, coefficients
// listed from the constant term upward.  Non-real roots come in adjacent
// conjugate pairs (upper half-plane first); real roots precede them.
std::vector<BigComplex> poly_roots(const std::vector<mpq_class>& coeffs, prec_t prec);

// Rational parsing accepting "p/q", integers and finite decimals.
mpq_class parse_rational(const std::string& s);

}  // namespace cmq
