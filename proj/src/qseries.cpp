#include "modflow/qseries.hpp"

#include <string>

namespace modflow
{

namespace
{

constexpr double series_rtol = 1e-17;
constexpr int min_terms = 8;
constexpr int max_terms = 200000;

struct Sums {
    std::array<cplx, 4> s{};
};

bool converged(const std::array<cplx, 4> &term, const Sums &acc, int order)
{
    for (int n = 0; n <= order; ++n) {
        if (std::abs(term[n]) >= series_rtol * std::abs(acc.s[n]) && std::abs(term[n]) > 1e-300) {
            return false;
        }
    }
    return true;
}

// Sum of exp(pi i tau m_k) * (pi i m_k)^n * weight_k over k, started at `acc`.
template <typename Exponent, typename Weight>
Sums exp_series(cplx tau, int order, Sums acc, int k0, Exponent exponent, Weight weight)
{
    const cplx pii = pi * I;
    for (int k = k0, taken = 1; k < k0 + max_terms; ++k, ++taken) {
        const double m = exponent(k);
        const cplx base = weight(k) * std::exp(pii * tau * m);
        std::array<cplx, 4> term{};
        cplx factor = 1.0;
        for (int n = 0; n <= order; ++n) {
            term[n] = base * factor;
            acc.s[n] += term[n];
            factor *= pii * m;
        }
        if (taken >= min_terms && converged(term, acc, order)) {
            return acc;
        }
    }
    throw NoConvergence("theta series did not converge");
}

Sums eta_series(cplx tau, int order)
{
    Sums acc;
    acc.s[0] = 2.0 * pi * pi / 24.0;
    for (int k = 1; k <= max_terms; ++k) {
        const cplx w = std::exp(2.0 * pi * I * tau * static_cast<double>(k));
        const cplx r = 1.0 - w;
        // theta^n applied to w / (1 - w)^2, theta = w d/dw
        const std::array<cplx, 4> f{
            w / (r * r),
            w * (1.0 + w) / (r * r * r),
            w * (1.0 + 4.0 * w + w * w) / (r * r * r * r),
            w * (1.0 + 11.0 * w + 11.0 * w * w + w * w * w) / (r * r * r * r * r),
        };
        const cplx chain = 2.0 * pi * I * static_cast<double>(k);
        std::array<cplx, 4> term{};
        cplx factor = 1.0;
        for (int n = 0; n <= order; ++n) {
            term[n] = -2.0 * pi * pi * factor * f[n];
            acc.s[n] += term[n];
            factor *= chain;
        }
        if (k >= min_terms && converged(term, acc, order)) {
            return acc;
        }
    }
    throw NoConvergence("eta series did not converge");
}

} // namespace

void check_tau(const Tau &tau)
{
    if (!(tau.im > 0.0) || !std::isfinite(tau.re) || !std::isfinite(tau.im)) {
        throw DomainError("tau must lie in the upper half-plane");
    }
    if (tau.im < im_floor) {
        throw DomainError("Im(tau) = " + std::to_string(tau.im) + " is below the floor " +
                          std::to_string(im_floor));
    }
}

cplx ThetaQuad::at(int n, int j) const
{
    if (n < 0 || n > max_order) {
        throw ParameterError("derivative order " + std::to_string(n) + " not computed");
    }
    return d[n][j];
}

ThetaQuad theta_quad(const Tau &tau, int max_order)
{
    check_tau(tau);
    if (max_order < 0 || max_order > 3) {
        throw ParameterError("derivative order must be in 0..3");
    }
    const cplx t = tau.value();
    const auto one = [](int) { return cplx(2.0); };
    const Sums s2 = exp_series(
        t, max_order, Sums{}, 0, [](int k) { return (k + 0.5) * (k + 0.5); }, one);
    Sums base;
    base.s[0] = 1.0;
    const Sums s3 = exp_series(
        t, max_order, base, 1, [](int k) { return double(k) * k; }, one);
    const Sums s4 = exp_series(
        t, max_order, base, 1, [](int k) { return double(k) * k; },
        [](int k) { return cplx(k % 2 == 0 ? 2.0 : -2.0); });
    const Sums se = eta_series(t, max_order);

    ThetaQuad q;
    q.tau = tau;
    q.max_order = max_order;
    for (int n = 0; n <= max_order; ++n) {
        q.d[n] = {s2.s[n], s3.s[n], s4.s[n], se.s[n]};
    }
    return q;
}

void Moebius::validate(double tol) const
{
    if (std::abs(det() - 1.0) > tol) {
        throw ParameterError("Moebius determinant must equal 1");
    }
}

ModularForms modular_forms(const ThetaQuad &tq)
{
    const cplx t2 = std::pow(tq.theta2(), 4), t3 = std::pow(tq.theta3(), 4), t4 = std::pow(tq.theta4(), 4);
    const double p4 = std::pow(pi, 4), p6 = std::pow(pi, 6);
    ModularForms f;
    f.g2_sym = p4 / 24.0 * (t2 * t2 + t3 * t3 + t4 * t4);
    f.g3_sym = p6 / 432.0 * (t2 + t3) * (t3 + t4) * (t4 - t2);
    f.g2 = p4 / 12.0 * (t3 * t3 - t3 * t4 + t4 * t4);
    f.g3 = p6 / 432.0 * (2.0 * t3 - t4) * (t3 + t4) * (2.0 * t4 - t3);
    f.E2 = 12.0 * tq.eta() / (pi * pi);
    f.E4 = 12.0 * f.g2 / p4;
    f.E6 = 216.0 * f.g3 / p6;
    return f;
}

Duplication duplication_values(const ThetaQuad &tq, cplx eta_tau, cplx g2_tau)
{
    const cplx s = std::pow(tq.theta3(), 4) + std::pow(tq.theta4(), 4);
    return {0.5 * eta_tau + pi * pi / 48.0 * s, -0.25 * g2_tau + 5.0 * std::pow(pi, 4) / 192.0 * s * s};
}

SystemState symmetric_state(const Tau &tau)
{
    const ThetaQuad q = theta_quad(tau);
    return {SystemTag::Symmetric8, {q.theta2(), q.theta3(), q.theta4(), q.eta()}};
}

SystemState canonical_state(const Tau &tau)
{
    const ThetaQuad q = theta_quad(tau);
    const cplx c = std::sqrt(pi * I / 6.0);
    return {SystemTag::Canonical19,
            {c * q.theta2() * q.theta2(), c * q.theta3() * q.theta3(), c * q.theta4() * q.theta4(),
             2.0 * I / pi * q.eta()}};
}

SystemState jacobi_theta_state(const Tau &tau)
{
    const ThetaQuad q = theta_quad(tau);
    const cplx s2 = q.theta2() * q.theta2(), s3 = q.theta3() * q.theta3(), s4 = q.theta4() * q.theta4();
    const cplx r2 = s2 * s2 / (s3 * s3), r4 = s4 * s4 / (s3 * s3);
    return {SystemTag::Jacobi9,
            {s3, 4.0 / (pi * pi * s3) * (q.eta() + pi * pi / 12.0 * (s2 * s2 - s4 * s4)), 4.0 - 8.0 * r2,
             2.0 * r2 * r4}};
}

SystemState closed_form_state(SystemTag system, cplx t, const ClosedFormParams &p)
{
    p.m.validate();
    const cplx w = p.m.denom(t);
    if (std::abs(w) < 1e-300) {
        throw DomainError("gamma t + delta vanishes");
    }
    if (system == SystemTag::Canonical19) {
        if (p.eps == cplx(0.0)) {
            const double sg = sign_of(p.sign);
            const cplx g = p.m.gamma, d = p.m.delta;
            return {system, {0.0, sg / w, 1.0 / w, -(g * g * t + g * d - 1.0) / (w * w)}};
        }
        const ThetaQuad q = theta_quad(Tau(p.m.apply(t)));
        const cplx c = std::sqrt(pi * I / 6.0);
        return {system,
                {p.eps * q.theta2() * q.theta2() / w, c * q.theta3() * q.theta3() / w,
                 c * q.theta4() * q.theta4() / w, 2.0 * I / pi * q.eta() / (w * w) - p.m.gamma / w}};
    }
    if (system == SystemTag::Jacobi9) {
        if (p.I == cplx(0.0)) {
            throw ParameterError("the integral I must be nonzero");
        }
        const double sg = sign_of(p.sign);
        const ThetaQuad q = theta_quad(Tau(p.m.apply(t)));
        const cplx s3 = q.theta3() * q.theta3();
        const cplx f2 = std::pow(q.theta2(), 4), f3 = s3 * s3, f4 = std::pow(q.theta4(), 4);
        const cplx Iv = p.I;
        const cplx A = sg * std::sqrt(pi * I / Iv) * s3 / w;
        const cplx B = sg * std::sqrt(I * Iv / (pi * pi * pi)) / (w * s3) *
                       (pi * pi / 12.0 * (f2 - f4) + q.eta() + pi / 2.0 * I * p.m.gamma * w);
        return {system, {A, B, Iv - 2.0 * Iv * f2 / f3, Iv * Iv / 8.0 * f2 * f4 / (f3 * f3)}};
    }
    throw UnsupportedSystem("closed form available for canonical19 and jacobi9 only");
}

} // namespace modflow
