#ifndef MODFLOW_JET_HPP
#define MODFLOW_JET_HPP

#include <array>
#include <complex>

#include "modflow/core.hpp"

namespace modflow
{

// First-order forward-mode jet over complex scalars: a value and N partial
// derivatives. All functions used on jets are holomorphic, so the partials are
// complex derivatives.
template <int N>
struct Jet {
    cplx v{};
    std::array<cplx, N> d{};

    Jet() = default;
    Jet(cplx value) : v(value) {}
    Jet(double value) : v(value) {}

    static Jet variable(cplx value, int index)
    {
        Jet j(value);
        j.d[static_cast<std::size_t>(index)] = 1.0;
        return j;
    }

    // Chain rule for a scalar function with value f and derivative df at v.
    Jet apply(cplx f, cplx df) const
    {
        Jet r(f);
        for (int i = 0; i < N; ++i) {
            r.d[i] = df * d[i];
        }
        return r;
    }

    Jet &operator+=(const Jet &o)
    {
        v += o.v;
        for (int i = 0; i < N; ++i) {
            d[i] += o.d[i];
        }
        return *this;
    }
    Jet &operator-=(const Jet &o)
    {
        v -= o.v;
        for (int i = 0; i < N; ++i) {
            d[i] -= o.d[i];
        }
        return *this;
    }
    Jet &operator*=(const Jet &o)
    {
        for (int i = 0; i < N; ++i) {
            d[i] = d[i] * o.v + v * o.d[i];
        }
        v *= o.v;
        return *this;
    }
    Jet &operator/=(const Jet &o)
    {
        const cplx inv = 1.0 / o.v;
        const cplx q = v * inv;
        for (int i = 0; i < N; ++i) {
            d[i] = (d[i] - q * o.d[i]) * inv;
        }
        v = q;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet &b) { return a += b; }
    friend Jet operator-(Jet a, const Jet &b) { return a -= b; }
    friend Jet operator*(Jet a, const Jet &b) { return a *= b; }
    friend Jet operator/(Jet a, const Jet &b) { return a /= b; }
    friend Jet operator-(Jet a)
    {
        a.v = -a.v;
        for (auto &x : a.d) {
            x = -x;
        }
        return a;
    }
};

template <int N>
Jet<N> sqrt(const Jet<N> &x)
{
    const cplx r = std::sqrt(x.v);
    return x.apply(r, 0.5 / r);
}

template <int N>
Jet<N> pow(const Jet<N> &x, cplx p)
{
    const cplx r = std::pow(x.v, p);
    return x.apply(r, p * r / x.v);
}

template <int N>
Jet<N> log(const Jet<N> &x)
{
    return x.apply(std::log(x.v), 1.0 / x.v);
}

template <int N>
Jet<N> exp(const Jet<N> &x)
{
    const cplx e = std::exp(x.v);
    return x.apply(e, e);
}

inline cplx value_of(cplx x) { return x; }

template <std::size_t M>
cplx lift(cplx, const std::array<cplx, M> &f)
{
    return f[0];
}

// f(x) for a jet x, given f and f' at its value.
template <int N, std::size_t M>
Jet<N> lift(const Jet<N> &x, const std::array<cplx, M> &f)
{
    static_assert(M >= 2);
    return x.apply(f[0], f[1]);
}

template <int N>
cplx value_of(const Jet<N> &x)
{
    return x.v;
}

} // namespace modflow

#endif
