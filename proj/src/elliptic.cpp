#include "modflow/elliptic.hpp"

#include <limits>
#include <tuple>
#include <utility>
#include <vector>

namespace modflow
{

namespace
{

constexpr double modulus_guard = 1e-10;

struct AgmResult {
    cplx K, E;
};

// K and E for the modulus with square k2, starting the AGM at (1, kp). Each
// geometric mean takes the right choice |a - b| <= |a + b|; with other choices
// the side sums stop pairing E with K. E = K (1 - sum 2^{n-1} c_n^2), c_0^2 = k^2.
AgmResult agm_KE(cplx kp, cplx k2)
{
    cplx a = 1.0, b = kp;
    cplx side = 0.5 * k2;
    double w = 0.5;
    for (int n = 1; n <= 80; ++n) {
        if (std::abs(a + b) < 1e-13 * std::abs(a)) {
            throw BranchError("AGM iterates cancel; modulus sits on a branch cut");
        }
        const cplx c = 0.5 * (a - b);
        const cplx an = 0.5 * (a + b);
        cplx bn = right_sqrt(a * b);
        if (std::abs(an - bn) > std::abs(an + bn)) {
            bn = -bn;
        }
        w *= 2.0;
        side += w * c * c;
        a = an;
        b = bn;
        if (std::abs(a - b) <= 1e-15 * std::abs(a)) {
            const cplx K = pi / (2.0 * a);
            return {K, K * (1.0 - side)};
        }
    }
    throw NoConvergence("AGM did not converge");
}

bool near_integer(cplx z, double tol = 1e-12)
{
    return std::abs(z.imag()) < tol && std::abs(z.real() - std::round(z.real())) < tol;
}

bool nonpositive_integer(cplx z) { return near_integer(z) && std::round(z.real()) <= 0.0; }

cplx direct_series(cplx a, cplx b, cplx c, cplx z)
{
    cplx sum = 1.0, term = 1.0;
    int small = 0;
    for (int n = 0; n < 60000; ++n) {
        const double dn = n;
        term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
        sum += term;
        if (term == cplx(0.0)) {
            return sum;
        }
        small = std::abs(term) < 1e-17 * std::abs(sum) ? small + 1 : 0;
        if (n >= 8 && small >= 2) {
            return sum;
        }
    }
    throw NoConvergence("hypergeometric series did not converge");
}

enum class Route { direct, pfaff, one_minus, inverse, inverse_one_minus };

struct Candidate {
    Route route;
    cplx z;
};

bool degenerate(Route r, cplx a, cplx b, cplx c)
{
    switch (r) {
    case Route::one_minus: return near_integer(c - a - b, 1e-9);
    case Route::inverse:
    case Route::inverse_one_minus: return near_integer(a - b, 1e-9);
    default: return false;
    }
}

cplx evaluate(Route r, cplx a, cplx b, cplx c, cplx s)
{
    switch (r) {
    case Route::direct: return direct_series(a, b, c, s);
    case Route::pfaff: return std::pow(1.0 - s, -a) * direct_series(a, c - b, c, s / (s - 1.0));
    case Route::one_minus: {
        const cplx w = 1.0 - s;
        const cplx t1 = gamma_fn(c) * gamma_fn(c - a - b) * rgamma(c - a) * rgamma(c - b) *
                        direct_series(a, b, a + b - c + 1.0, w);
        const cplx t2 = std::pow(w, c - a - b) * gamma_fn(c) * gamma_fn(a + b - c) * rgamma(a) * rgamma(b) *
                        direct_series(c - a, c - b, c - a - b + 1.0, w);
        return t1 + t2;
    }
    case Route::inverse: {
        const cplx w = 1.0 / s;
        const cplx t1 = gamma_fn(c) * gamma_fn(b - a) * rgamma(b) * rgamma(c - a) * std::pow(-s, -a) *
                        direct_series(a, a - c + 1.0, a - b + 1.0, w);
        const cplx t2 = gamma_fn(c) * gamma_fn(a - b) * rgamma(a) * rgamma(c - b) * std::pow(-s, -b) *
                        direct_series(b, b - c + 1.0, b - a + 1.0, w);
        return t1 + t2;
    }
    case Route::inverse_one_minus: {
        const cplx w = 1.0 / (1.0 - s);
        const cplx t1 = gamma_fn(c) * gamma_fn(b - a) * rgamma(b) * rgamma(c - a) * std::pow(1.0 - s, -a) *
                        direct_series(a, c - b, a - b + 1.0, w);
        const cplx t2 = gamma_fn(c) * gamma_fn(a - b) * rgamma(a) * rgamma(c - b) * std::pow(1.0 - s, -b) *
                        direct_series(b, c - a, b - a + 1.0, w);
        return t1 + t2;
    }
    }
    return {};
}

// Taylor re-expansion of the hypergeometric equation
//   s (1 - s) F'' + (c - (a + b + 1) s) F' - a b F = 0
// from (z0, F, F') to z0 + h, with |h| at most half the distance to {0, 1}.
std::pair<cplx, cplx> ode_step(cplx a, cplx b, cplx c, cplx z0, cplx f, cplx df, cplx h)
{
    const cplx p0 = z0 * (1.0 - z0), p1 = 1.0 - 2.0 * z0;
    const cplx q0 = c - (a + b + 1.0) * z0, q1 = -(a + b + 1.0), ab = a * b;
    cplx fn = f, fn1 = df;  // f_n h^n and f_{n+1} h^{n+1}
    fn1 *= h;
    cplx sum = fn + fn1, dsum = fn1 / h;
    int small = 0;
    for (int n = 0; n < 2000; ++n) {
        const double dn = n;
        // f_{n+2} from the recurrence, carried with its power of h
        const cplx next = -((p1 * dn + q0) * (dn + 1.0) * fn1 * h + (-dn * (dn - 1.0) + q1 * dn - ab) * fn * h * h) /
                          (p0 * (dn + 2.0) * (dn + 1.0));
        sum += next;
        dsum += (dn + 2.0) * next / h;
        fn = fn1;
        fn1 = next;
        small = std::abs(next) < 1e-18 * std::abs(sum) ? small + 1 : 0;
        if (n >= 4 && small >= 3) {
            return {sum, dsum};
        }
    }
    throw NoConvergence("hypergeometric continuation step did not converge");
}

// Analytic continuation along 0 -> [waypoint] -> s. Points with Re s > 1 are
// reached through 1 + i/2 or 1 - i/2 according to the sign of Im s, so the
// cut [1, inf) is never crossed.
cplx continue_hyp2f1(cplx a, cplx b, cplx c, cplx s)
{
    std::vector<cplx> nodes;
    if (s.real() > 1.0) {
        nodes.push_back(cplx(1.0, s.imag() >= 0.0 ? 0.5 : -0.5));
    }
    nodes.push_back(s);
    const cplx start = 0.5 * nodes.front() / std::abs(nodes.front());
    cplx z = start;
    cplx f = direct_series(a, b, c, z);
    cplx df = a * b / c * direct_series(a + 1.0, b + 1.0, c + 1.0, z);
    for (const cplx target : nodes) {
        for (int guard = 0; std::abs(target - z) > 0.0; ++guard) {
            if (guard > 5000) {
                throw NoConvergence("hypergeometric continuation took too many steps");
            }
            const double radius = std::min(std::abs(z), std::abs(1.0 - z));
            const cplx d = target - z;
            const double len = std::abs(d);
            const cplx h = len <= 0.5 * radius ? d : d * (0.5 * radius / len);
            std::tie(f, df) = ode_step(a, b, c, z, f, df, h);
            z = len <= 0.5 * radius ? target : z + h;
        }
    }
    return f;
}

} // namespace

LegendreQuad legendre_quad(const Modulus &m)
{
    const cplx k = m.k;
    if (!is_finite(k)) {
        throw DomainError("modulus is not finite");
    }
    const cplx k2 = k * k;
    if (std::abs(k) < modulus_guard || std::abs(1.0 - k2) < modulus_guard) {
        throw SingularModulus("modulus too close to 0 or +-1");
    }
    const cplx kp = m.complementary();
    if (std::abs(kp * kp - (1.0 - k2)) > 1e-10 * std::max(1.0, std::abs(1.0 - k2))) {
        throw ParameterError("complementary modulus does not satisfy k^2 + k'^2 = 1");
    }
    const AgmResult main = agm_KE(kp, k2);
    const AgmResult comp = agm_KE(k, 1.0 - k2);
    return {main.K, comp.K, main.E, comp.E};
}

LegendreDeriv legendre_quad_deriv(const Modulus &m, const LegendreQuad &q)
{
    const cplx k = m.k;
    const cplx k2 = k * k;
    if (std::abs(k) < modulus_guard || std::abs(1.0 - k2) < modulus_guard) {
        throw SingularModulus("modulus too close to 0 or +-1");
    }
    return {
        -q.K / k - q.E / ((k2 - 1.0) * k),
        k * q.Kprime / (1.0 - k2) + q.Eprime / ((k2 - 1.0) * k),
        -q.K / k + q.E / k,
        k * q.Kprime / (1.0 - k2) + k * q.Eprime / (k2 - 1.0),
    };
}

LegendreQuad legendre_general(const LegendreQuad &c, cplx alpha, cplx beta, cplx gamma, cplx delta)
{
    return {alpha * c.K - beta * c.Kprime, gamma * c.K + delta * c.Kprime,
            alpha * c.E + beta * (c.Eprime - c.Kprime), delta * c.Eprime + gamma * (c.K - c.E)};
}

cplx gamma_fn(cplx z)
{
    static constexpr std::array<double, 9> coef{
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    if (nonpositive_integer(z)) {
        throw ParameterError("Gamma has a pole at a non-positive integer");
    }
    if (z.real() < 0.5) {
        return pi / (std::sin(pi * z) * gamma_fn(1.0 - z));
    }
    z -= 1.0;
    cplx x = coef[0];
    for (int i = 1; i < 9; ++i) {
        x += coef[i] / (z + static_cast<double>(i));
    }
    const cplx t = z + 7.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cplx rgamma(cplx z)
{
    if (nonpositive_integer(z)) {
        return 0.0;
    }
    return 1.0 / gamma_fn(z);
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx s, CutSide side)
{
    if (nonpositive_integer(c)) {
        throw ParameterError("2F1 undefined for c a non-positive integer");
    }
    if (!is_finite(s) || !is_finite(a) || !is_finite(b) || !is_finite(c)) {
        throw DomainError("non-finite 2F1 argument");
    }
    if (s == cplx(0.0)) {
        return 1.0;
    }
    const bool polynomial = nonpositive_integer(a) || nonpositive_integer(b);
    if (s.imag() == 0.0 && s.real() >= 1.0 && !polynomial) {
        if (side == CutSide::none) {
            throw CutError("argument on the cut [1, inf) without a side");
        }
        const double eps = 1e-15 * std::max(1.0, s.real());
        s = cplx(s.real(), side == CutSide::above ? eps : -eps);
    }
    if (std::abs(s) <= 0.7 || polynomial) {
        return direct_series(a, b, c, s);
    }
    const std::array<Candidate, 5> candidates{{
        {Route::direct, s},
        {Route::pfaff, s / (s - 1.0)},
        {Route::one_minus, 1.0 - s},
        {Route::inverse, 1.0 / s},
        {Route::inverse_one_minus, 1.0 / (1.0 - s)},
    }};
    const Candidate *best = nullptr;
    for (const auto &cand : candidates) {
        if (degenerate(cand.route, a, b, c)) {
            continue;
        }
        if (!best || std::abs(cand.z) < std::abs(best->z)) {
            best = &cand;
        }
    }
    if (best && std::abs(best->z) <= 0.7) {
        return evaluate(best->route, a, b, c, s);
    }
    return continue_hyp2f1(a, b, c, s);
}

LegendrePQSeries legendre_PQ_series(cplx nu, cplx mu, const Series<2> &z)
{
    const cplx z0 = z.c[0];
    if (!is_finite(z0)) {
        throw DomainError("non-finite Legendre argument");
    }
    if (z0.imag() == 0.0 && z0.real() <= 1.0) {
        throw CutError("Legendre argument on the cut (-inf, 1]");
    }
    if (nonpositive_integer(1.0 - mu) || nonpositive_integer(nu + 1.5)) {
        throw ParameterError("degenerate Legendre indices");
    }
    const Series<2> one(1.0);
    LegendrePQSeries r;
    r.P = pow((z + one) / (z - one), mu / 2.0) *
          hyp2f1_lift(nu + 1.0, -nu, 1.0 - mu, Series<2>(0.5) - Series<2>(0.5) * z) * Series<2>(rgamma(1.0 - mu));
    const cplx pref = std::exp(mu * pi * I) * std::sqrt(pi) * gamma_fn(nu + mu + 1.0) / std::pow(2.0, nu + 1.0) *
                      rgamma(nu + 1.5);
    const Series<2> zz = z * z;
    r.Q = Series<2>(pref) * pow(z - one, mu / 2.0) * pow(z + one, mu / 2.0) / pow(z, nu + mu + 1.0) *
          hyp2f1_lift(nu / 2.0 + mu / 2.0 + 1.0, nu / 2.0 + mu / 2.0 + 0.5, nu + 1.5, one / zz);
    return r;
}

LegendrePQ legendre_PQ(cplx nu, cplx mu, cplx z)
{
    Series<2> zs(z);
    zs.c[1] = 1.0;
    const LegendrePQSeries s = legendre_PQ_series(nu, mu, zs);
    return {s.P.c[0], s.Q.c[0]};
}

cplx legendre_ode_residual(cplx nu, cplx mu, cplx z, const Series<2> &psi)
{
    const cplx p0 = psi.c[0], p1 = psi.c[1], p2 = 2.0 * psi.c[2];
    return (1.0 - z * z) * p2 - 2.0 * z * p1 + (nu * (nu + 1.0) - mu * mu / (1.0 - z * z)) * p0;
}

} // namespace modflow
