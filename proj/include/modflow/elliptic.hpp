#ifndef MODFLOW_ELLIPTIC_HPP
#define MODFLOW_ELLIPTIC_HPP

#include <array>
#include <optional>

#include "modflow/core.hpp"
#include "modflow/scalar.hpp"

namespace modflow
{

// Legendre modulus. The complementary modulus defaults to the principal root
// of 1 - k^2; supplying it explicitly selects the branch of K, E (the AGM is
// started from it) and of K', E' is unaffected.
struct Modulus {
    cplx k;
    std::optional<cplx> kprime;

    Modulus(cplx k_) : k(k_) {}
    Modulus(cplx k_, cplx kp) : k(k_), kprime(kp) {}
    cplx complementary() const { return kprime ? *kprime : std::sqrt(1.0 - k * k); }
};

struct LegendreQuad {
    cplx K, Kprime, E, Eprime;
};

struct LegendreDeriv {
    cplx dK, dKprime, dE, dEprime;
};

// Throws SingularModulus near k in {0, 1, -1}, BranchError when the AGM
// degenerates.
LegendreQuad legendre_quad(const Modulus &m);

// k-derivatives of a quadruple, from the differentially closed system.
LegendreDeriv legendre_quad_deriv(const Modulus &m, const LegendreQuad &lq);

// Four-parameter general solution built from the canonical quadruple.
LegendreQuad legendre_general(const LegendreQuad &canonical, cplx alpha, cplx beta, cplx gamma, cplx delta);

// K*E' + K'*E - K*K'
inline cplx legendre_level(const LegendreQuad &q) { return q.K * q.Eprime + q.Kprime * q.E - q.K * q.Kprime; }

// K, K', E, E' lifted to a jet in k. kprime selects the branch as in Modulus.
template <typename T>
std::array<T, 4> legendre_quad_lift(const T &k, std::optional<cplx> kprime = std::nullopt)
{
    static_assert(lift_order<T>::value <= 1, "only first derivatives are available");
    const cplx k0 = value_of(k);
    const Modulus m = kprime ? Modulus(k0, *kprime) : Modulus(k0);
    const LegendreQuad q = legendre_quad(m);
    if constexpr (lift_order<T>::value == 0) {
        return {q.K, q.Kprime, q.E, q.Eprime};
    } else {
        const LegendreDeriv d = legendre_quad_deriv(m, q);
        using A = std::array<cplx, lift_order<T>::value + 1>;
        return {lift(k, A{q.K, d.dK}), lift(k, A{q.Kprime, d.dKprime}), lift(k, A{q.E, d.dE}),
                lift(k, A{q.Eprime, d.dEprime})};
    }
}

// Complex Gamma and its reciprocal (zero at the poles).
cplx gamma_fn(cplx z);
cplx rgamma(cplx z);

enum class CutSide { none, above, below };

// Gauss hypergeometric function 2F1(a, b; c | s).
cplx hyp2f1(cplx a, cplx b, cplx c, cplx s, CutSide side = CutSide::none);

// 2F1 lifted onto jets or series through d/ds 2F1 = (ab/c) 2F1(a+1, b+1; c+1).
template <typename T>
T hyp2f1_lift(cplx a, cplx b, cplx c, const T &s)
{
    constexpr int n = lift_order<T>::value;
    std::array<cplx, n + 1> f{};
    const cplx s0 = value_of(s);
    cplx coef = 1.0;
    for (int j = 0; j <= n; ++j) {
        const double dj = j;
        f[j] = coef * hyp2f1(a + dj, b + dj, c + dj, s0);
        coef *= (a + dj) * (b + dj) / (c + dj);
    }
    return lift(s, f);
}

struct LegendrePQ {
    cplx P, Q;
};

// Associated Legendre functions of the first and second kind off the cut
// (-inf, 1] (the "type 3" convention, including the e^{i pi mu} factor in Q).
LegendrePQ legendre_PQ(cplx nu, cplx mu, cplx z);

// Same, as second-order series in z around z0 (value, first, second derivative
// recoverable from the coefficients).
struct LegendrePQSeries {
    Series<2> P, Q;
};
LegendrePQSeries legendre_PQ_series(cplx nu, cplx mu, const Series<2> &z);

// Residual of (1 - z^2) psi'' - 2 z psi' + (nu(nu+1) - mu^2/(1 - z^2)) psi.
cplx legendre_ode_residual(cplx nu, cplx mu, cplx z, const Series<2> &psi);

} // namespace modflow

#endif
