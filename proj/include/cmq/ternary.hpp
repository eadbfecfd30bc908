#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "cmq/mpnum.hpp"

namespace cmq {

// Scalar glue so the same form code runs over exact rationals and BigComplex.
inline mpq_class scalar_like(const mpq_class&, const mpq_class& q) { return q; }
inline BigComplex scalar_like(const BigComplex& like, const mpq_class& q) { return BigComplex(q, like.prec()); }
inline bool scalar_is_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool scalar_is_zero(const BigComplex& x) { return x.is_zero(); }

// Homogeneous ternary form of degree d.  Coefficients are stored in
// degree-lexicographic order with x > y > z, so for d = 4:
// x^4, x^3y, x^3z, x^2y^2, x^2yz, x^2z^2, xy^3, ..., z^4.
// Forms in the dual variables u use the same class.
template <class T>
class Form {
public:
    Form() = default;
    Form(int d, const T& zero) : d_(d), c_(std::size_t(size(d)), zero), zero_(zero) {}

    static int size(int d) { return (d + 1) * (d + 2) / 2; }
    static int index(int d, int i, int j) { return (d - i) * (d - i + 1) / 2 + (d - i - j); }
    // exponents of the n-th monomial
    static std::array<int, 3> exponents(int d, int n) {
        int i = d;
        while (n >= d - i + 1) {
            n -= d - i + 1;
            --i;
        }
        int j = d - i - n;
        return {i, j, d - i - j};
    }

    int degree() const { return d_; }
    const T& zero() const { return zero_; }
    std::size_t nterms() const { return c_.size(); }
    T& operator[](std::size_t n) { return c_[n]; }
    const T& operator[](std::size_t n) const { return c_[n]; }
    T& at(int i, int j, int k) {
        check(i, j, k);
        return c_[std::size_t(index(d_, i, j))];
    }
    const T& at(int i, int j, int k) const {
        check(i, j, k);
        return c_[std::size_t(index(d_, i, j))];
    }

    static Form variable(int v, const T& zero) {
        Form f(1, zero);
        f[std::size_t(v)] = scalar_like(zero, 1);
        return f;
    }

    Form& operator+=(const Form& o) {
        same_degree(o);
        for (std::size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
        return *this;
    }
    Form& operator-=(const Form& o) {
        same_degree(o);
        for (std::size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
        return *this;
    }
    Form& operator*=(const T& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    Form& operator*=(const mpq_class& s) requires(!std::is_same_v<T, mpq_class>) {
        T v = scalar_like(zero_, s);
        for (auto& x : c_) x *= v;
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(Form a, const T& s) { return a *= s; }

    friend Form operator*(const Form& a, const Form& b) {
        Form r(a.d_ + b.d_, a.zero_);
        for (std::size_t m = 0; m < a.c_.size(); ++m) {
            if (scalar_is_zero(a.c_[m])) continue;
            auto ea = exponents(a.d_, int(m));
            for (std::size_t n = 0; n < b.c_.size(); ++n) {
                if (scalar_is_zero(b.c_[n])) continue;
                auto eb = exponents(b.d_, int(n));
                r.c_[std::size_t(index(r.d_, ea[0] + eb[0], ea[1] + eb[1]))] += a.c_[m] * b.c_[n];
            }
        }
        return r;
    }

    Form derivative(int v) const {
        if (d_ == 0) return Form(0, zero_);
        Form r(d_ - 1, zero_);
        for (std::size_t n = 0; n < c_.size(); ++n) {
            auto e = exponents(d_, int(n));
            if (e[std::size_t(v)] == 0 || scalar_is_zero(c_[n])) continue;
            T t = c_[n] * scalar_like(zero_, e[std::size_t(v)]);
            e[std::size_t(v)] -= 1;
            r.c_[std::size_t(index(r.d_, e[0], e[1]))] += t;
        }
        return r;
    }

    // constant term of a degree 0 form
    const T& value() const {
        if (d_ != 0) throw std::logic_error("value() of a non-constant form");
        return c_[0];
    }

private:
    void check(int i, int j, int k) const {
        if (i < 0 || j < 0 || k < 0 || i + j + k != d_) throw std::out_of_range("bad monomial exponents");
    }
    void same_degree(const Form& o) const {
        if (o.d_ != d_) throw std::logic_error("degree mismatch");
    }

    int d_ = 0;
    std::vector<T> c_;
    T zero_{};
};

// g(d/dx) f: the dual form g acting as a differential operator on f.
template <class T>
Form<T> apply_operator(const Form<T>& g, const Form<T>& f) {
    int m = g.degree(), n = f.degree();
    if (m > n) throw std::logic_error("operator degree exceeds form degree");
    Form<T> r(n - m, f.zero());
    for (std::size_t a = 0; a < g.nterms(); ++a) {
        if (scalar_is_zero(g[a])) continue;
        auto eg = Form<T>::exponents(m, int(a));
        for (std::size_t b = 0; b < f.nterms(); ++b) {
            if (scalar_is_zero(f[b])) continue;
            auto ef = Form<T>::exponents(n, int(b));
            if (ef[0] < eg[0] || ef[1] < eg[1] || ef[2] < eg[2]) continue;
            // falling factorials
            long k = 1;
            for (int v = 0; v < 3; ++v)
                for (int s = 0; s < eg[std::size_t(v)]; ++s) k *= ef[std::size_t(v)] - s;
            T t = g[a] * f[b];
            t *= scalar_like(f.zero(), k);
            r[std::size_t(Form<T>::index(n - m, ef[0] - eg[0], ef[1] - eg[1]))] += t;
        }
    }
    return r;
}

// Symmetric matrix of a conic: q = x^T M x.
template <class T>
std::array<std::array<T, 3>, 3> conic_matrix(const Form<T>& q) {
    if (q.degree() != 2) throw std::logic_error("conic_matrix needs a quadratic form");
    std::array<std::array<T, 3>, 3> m;
    T half = scalar_like(q.zero(), mpq_class(1, 2));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            std::array<int, 3> e{0, 0, 0};
            e[std::size_t(i)] += 1;
            e[std::size_t(j)] += 1;
            m[std::size_t(i)][std::size_t(j)] = q.at(e[0], e[1], e[2]);
            if (i != j) m[std::size_t(i)][std::size_t(j)] *= half;
        }
    return m;
}

}  // namespace cmq
