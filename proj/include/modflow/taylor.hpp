#ifndef MODFLOW_TAYLOR_HPP
#define MODFLOW_TAYLOR_HPP

#include <array>
#include <complex>

#include "modflow/core.hpp"

namespace modflow
{

// Truncated Taylor series c[0] + c[1] t + ... + c[N] t^N in a complex time
// offset t. Arithmetic is exact up to truncation.
template <int N>
struct Series {
    std::array<cplx, N + 1> c{};

    Series() = default;
    Series(cplx constant) { c[0] = constant; }
    Series(double constant) { c[0] = constant; }

    Series &operator+=(const Series &o)
    {
        for (int i = 0; i <= N; ++i) {
            c[i] += o.c[i];
        }
        return *this;
    }
    Series &operator-=(const Series &o)
    {
        for (int i = 0; i <= N; ++i) {
            c[i] -= o.c[i];
        }
        return *this;
    }

    friend Series operator+(Series a, const Series &b) { return a += b; }
    friend Series operator-(Series a, const Series &b) { return a -= b; }
    friend Series operator-(Series a)
    {
        for (auto &x : a.c) {
            x = -x;
        }
        return a;
    }
    friend Series operator*(const Series &a, const Series &b)
    {
        Series r;
        for (int i = 0; i <= N; ++i) {
            cplx acc = 0.0;
            for (int j = 0; j <= i; ++j) {
                acc += a.c[j] * b.c[i - j];
            }
            r.c[i] = acc;
        }
        return r;
    }
    friend Series operator/(const Series &a, const Series &b)
    {
        if (b.c[0] == cplx(0.0)) {
            throw SingularState("division by a series with zero constant term");
        }
        Series r;
        for (int i = 0; i <= N; ++i) {
            cplx acc = a.c[i];
            for (int j = 1; j <= i; ++j) {
                acc -= b.c[j] * r.c[i - j];
            }
            r.c[i] = acc / b.c[0];
        }
        return r;
    }
    Series &operator*=(const Series &o) { return *this = *this * o; }
    Series &operator/=(const Series &o) { return *this = *this / o; }

    // d/dt; the top coefficient becomes unknown and is set to zero.
    Series derivative() const
    {
        Series r;
        for (int i = 0; i < N; ++i) {
            r.c[i] = static_cast<double>(i + 1) * c[i + 1];
        }
        return r;
    }

    // n-th derivative at t = 0.
    cplx derivative_at_zero(int n) const
    {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) {
            f *= i;
        }
        return f * c[n];
    }
};

template <int N>
cplx value_of(const Series<N> &s)
{
    return s.c[0];
}

// f(x) for a series x, given f^(j) at the constant term for j = 0..N.
template <int N>
Series<N> lift(const Series<N> &x, const std::array<cplx, N + 1> &f)
{
    Series<N> dx = x;
    dx.c[0] = 0.0;
    std::array<double, N + 1> fact{};
    fact[0] = 1.0;
    for (int j = 1; j <= N; ++j) {
        fact[j] = fact[j - 1] * j;
    }
    Series<N> r(f[N] / fact[N]);
    for (int j = N - 1; j >= 0; --j) {
        r = r * dx + Series<N>(f[j] / fact[j]);
    }
    return r;
}

template <int N>
Series<N> pow(const Series<N> &x, cplx p)
{
    std::array<cplx, N + 1> f{};
    const cplx x0 = x.c[0];
    cplx coef = 1.0;
    for (int j = 0; j <= N; ++j) {
        f[j] = coef * std::pow(x0, p - static_cast<double>(j));
        coef *= p - static_cast<double>(j);
    }
    return lift(x, f);
}

template <int N>
Series<N> sqrt(const Series<N> &x)
{
    return pow(x, cplx(0.5));
}

template <int N>
Series<N> exp(const Series<N> &x)
{
    std::array<cplx, N + 1> f{};
    f.fill(std::exp(x.c[0]));
    return lift(x, f);
}

template <int N>
Series<N> log(const Series<N> &x)
{
    std::array<cplx, N + 1> f{};
    f[0] = std::log(x.c[0]);
    double sign = 1.0, fact = 1.0;
    for (int j = 1; j <= N; ++j) {
        f[j] = sign * fact / std::pow(x.c[0], j);
        sign = -sign;
        fact *= j;
    }
    return lift(x, f);
}

} // namespace modflow

#endif
