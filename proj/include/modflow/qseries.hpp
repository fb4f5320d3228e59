#ifndef MODFLOW_QSERIES_HPP
#define MODFLOW_QSERIES_HPP

#include <array>

#include "modflow/core.hpp"
#include "modflow/system.hpp"

namespace modflow
{

// A point of the upper half-plane.
struct Tau {
    double re = 0.0;
    double im = 1.0;

    Tau() = default;
    Tau(double re_, double im_) : re(re_), im(im_) {}
    explicit Tau(cplx t) : re(t.real()), im(t.imag()) {}
    cplx value() const { return {re, im}; }
};

// Throws DomainError unless im > 0 and im >= im_floor.
void check_tau(const Tau &tau);

// Indices into ThetaQuad::d[n].
enum QuadIndex { th2 = 0, th3 = 1, th4 = 2, eta_i = 3 };

// (theta2, theta3, theta4, eta) and tau-derivatives up to max_order.
// d[n][j] is the n-th derivative of component j.
struct ThetaQuad {
    Tau tau;
    int max_order = 0;
    std::array<std::array<cplx, 4>, 4> d{};

    cplx theta2(int n = 0) const { return at(n, th2); }
    cplx theta3(int n = 0) const { return at(n, th3); }
    cplx theta4(int n = 0) const { return at(n, th4); }
    cplx eta(int n = 0) const { return at(n, eta_i); }
    cplx at(int n, int j) const;
};

ThetaQuad theta_quad(const Tau &tau, int max_order = 0);

// Fractional-linear map t -> (alpha t + beta) / (gamma t + delta) with unit
// determinant.
struct Moebius {
    cplx alpha{1.0}, beta{0.0}, gamma{0.0}, delta{1.0};

    static Moebius identity() { return {}; }
    cplx det() const { return alpha * delta - beta * gamma; }
    cplx denom(cplx t) const { return gamma * t + delta; }
    cplx apply(cplx t) const { return (alpha * t + beta) / denom(t); }
    // Throws ParameterError if |det - 1| > tol.
    void validate(double tol = 1e-12) const;
};

struct ModularForms {
    // Symmetric convention using all three thetas.
    cplx g2_sym, g3_sym;
    // Convention built from theta3 and theta4 only; the one carried by the
    // Weierstrass flow.
    cplx g2, g3;
    cplx E2, E4, E6;
};

ModularForms modular_forms(const ThetaQuad &tq);

struct Duplication {
    cplx eta_2tau, g2_2tau;
};

// eta and g2 at 2 tau from values at tau.
Duplication duplication_values(const ThetaQuad &tq, cplx eta_tau, cplx g2_tau);

// Theta-generated states at tau.
SystemState symmetric_state(const Tau &tau);     // (theta2, theta3, theta4, eta)
SystemState canonical_state(const Tau &tau);     // (x, y, z, u) with the sqrt(pi i / 6) scaling
SystemState jacobi_theta_state(const Tau &tau);  // (A, B, a, b) from the theta form, I = 4, time pi i tau / 4

struct ClosedFormParams {
    Moebius m{};
    cplx eps{0.0};       // Canonical19 only
    cplx I{4.0};         // Jacobi9 only
    Branch sign = Branch::plus;
};

// General solutions. For Canonical19 `t` is tau; for Jacobi9 it is the
// system's own variable h, and the thetas are evaluated at
// (alpha h + beta) / (gamma h + delta). With eps = 0 the Canonical19 family
// is the elementary decoupled one and `sign` picks the sign of y.
SystemState closed_form_state(SystemTag system, cplx t, const ClosedFormParams &p);

} // namespace modflow

#endif
