#ifndef MODFLOW_FLOWS_HPP
#define MODFLOW_FLOWS_HPP

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "modflow/core.hpp"
#include "modflow/scalar.hpp"
#include "modflow/system.hpp"

namespace modflow
{

using MatX = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

// Right-hand side of every system, generic over cplx, Jet and Series so the
// same expression yields values, Jacobians and Taylor coefficients. `t` is the
// system's own time; only LegendreClosure28 (time k) reads it.
template <typename T>
std::vector<T> field(const SystemId &id, const std::vector<T> &s, const T &t = T(0.0))
{
    const double p = pi;
    const cplx ip = I / p;
    switch (id.tag) {
    case SystemTag::Symmetric8: {
        const T &a = s[0], &b = s[1], &c = s[2], &e = s[3];
        const T a4 = a * a * a * a, b4 = b * b * b * b, c4 = c * c * c * c;
        const double q = p * p / 12.0;
        return {ip * (e + q * (b4 + c4)) * a, ip * (e + q * (a4 - c4)) * b, ip * (e - q * (a4 + b4)) * c,
                ip * (2.0 * e * e - p * p * p * p / 144.0 * (a4 * a4 + b4 * b4 + c4 * c4))};
    }
    case SystemTag::Jacobi9: {
        const T &A = s[0], &B = s[1], &a = s[2], &b = s[3];
        const T A2 = A * A;
        return {2.0 * A2 * B, b * A2 * A, -16.0 * b * A2, a * b * A2};
    }
    case SystemTag::Canonical19: {
        const T &x = s[0], &y = s[1], &z = s[2], &u = s[3];
        const T y2 = y * y, z2 = z * z;
        return {(u + y2 + z2) * x, (u + y2 - 2.0 * z2) * y, (u - 2.0 * y2 + z2) * z,
                u * u - y2 * y2 + y2 * z2 - z2 * z2};
    }
    case SystemTag::Intermediate25: {
        const T &A = s[0], &B = s[1], &k = s[2], &Iv = s[3];
        const T A2 = A * A, k2 = k * k;
        return {2.0 * A2 * B, Iv * Iv / 8.0 * k2 * (1.0 - k2) * A2 * A, Iv / 2.0 * k * (1.0 - k2) * A2, T(0.0)};
    }
    case SystemTag::LegendreClosure28: {
        const cplx k0 = value_of(t);
        if (std::abs(k0) < 1e-10 || std::abs(1.0 - k0 * k0) < 1e-10) {
            throw SingularModulus("Legendre closure is singular at k = 0, +-1");
        }
        const T &K = s[0], &Kp = s[1], &E = s[2], &Ep = s[3];
        const T &k = t;
        const T k2 = k * k;
        return {-K / k - E / ((k2 - 1.0) * k), k * Kp / (1.0 - k2) + Ep / ((k2 - 1.0) * k), -K / k + E / k,
                k * Kp / (1.0 - k2) + k * Ep / (k2 - 1.0)};
    }
    case SystemTag::DarbouxHalphen2: {
        const T &X = s[0], &Y = s[1], &Z = s[2];
        return {(Y + Z) * X - Y * Z, (X + Z) * Y - X * Z, (X + Y) * Z - X * Y};
    }
    case SystemTag::Weierstrass3: {
        const T &g2 = s[0], &g3 = s[1], &e = s[2];
        return {ip * (8.0 * g2 * e - 12.0 * g3), ip * (12.0 * g3 * e - 2.0 / 3.0 * g2 * g2),
                ip * (2.0 * e * e - g2 / 6.0)};
    }
    case SystemTag::Ramamani44: {
        const T &P = s[0], &Pt = s[1], &Q = s[2];
        const cplx pi_i = p * I;
        return {0.5 * pi_i * (P * P - Q), pi_i * (P * Pt - Q), 2.0 * pi_i * (P - Pt) * Q};
    }
    case SystemTag::HalphenBrioschi57: {
        const HBCoefficients c = id.coefficients();
        const T &x = s[0], &y = s[1], &z = s[2];
        const T Xi = c.a * (y - x) * (y - x) + c.b * (z - x) * (z - x) + c.c * (z - y) * (z - y);
        return {x * x + Xi, y * y + Xi, z * z + Xi};
    }
    }
    return {};
}

std::vector<cplx> vector_field(const SystemState &s, cplx t = 0.0);

// Analytic Jacobian W_jk = dV_j / dX_k (forward-mode differentiation).
MatX jacobian(const SystemState &s, cplx t = 0.0);

// Taylor coefficients of the solution through s at time offset 0, exact to
// order N for polynomial right-hand sides.
template <int N>
std::vector<Series<N>> taylor_flow(const SystemState &s)
{
    if (s.tag() == SystemTag::LegendreClosure28) {
        throw UnsupportedSystem("Taylor propagation needs a polynomial right-hand side");
    }
    std::vector<Series<N>> x(s.v.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = Series<N>(s.v[i]);
    }
    for (int it = 0; it < N; ++it) {
        const std::vector<Series<N>> f = field<Series<N>>(s.system, x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (int j = 0; j < N; ++j) {
                x[i].c[j + 1] = f[i].c[j] / static_cast<double>(j + 1);
            }
        }
    }
    return x;
}

// d^n/dt^n of one component along the flow, n = 1..order (order <= 4).
std::vector<cplx> lie_derivatives(const SystemState &s, int component, int order);

// Branch choices for the multi-valued point transformations.
struct TransformOptions {
    // Sign of sqrt((y^2 - z^2) / (pi x^2)) in the Jacobi-type maps, and of
    // sqrt(I / 12i) on the way back.
    Branch ic = Branch::plus;
    // Sign of I = sqrt(a^2 + 32 b) and of k = sqrt(1/2 - a / 2I) from (a, b).
    Branch jacobi_i = Branch::plus;
    Branch jacobi_k = Branch::plus;
    // Signs of y and z when they are recovered from squares.
    Branch y = Branch::plus;
    Branch z = Branch::plus;
    // x is not carried by the Darboux-Halphen variables; it must be supplied.
    std::optional<cplx> x;
    // Factor kappa in pi^2 Q = kappa * 36 y^2 z^2. The series definitions give
    // kappa = -1; +1 is kept to measure the opposite-sign substitution.
    double ramamani_kappa = -1.0;
    // Which of X - Y and X - Z is the first root when inverting the Ramamani map.
    Branch ramamani_root = Branch::plus;
    // Weierstrass -> Darboux-Halphen: assign roots to the permutation closest
    // to this triple; otherwise roots are ordered by real, then imaginary part.
    std::optional<std::array<cplx, 3>> reference;
};

struct TransformPair {
    SystemTag from, to;
};

bool transform_supported(SystemTag from, SystemTag to) noexcept;

// Point transformation between systems. `t` is the source time (needed by
// LegendreClosure28 -> Jacobi9, where it is k).
SystemState transform_state(const SystemState &from, SystemId to, const TransformOptions &opt = {},
                            cplx t = 0.0);

// T_kn = d(target_k) / d(source_n).
MatX transform_jacobian(const SystemState &from, SystemId to, const TransformOptions &opt = {}, cplx t = 0.0);

// Push-forward consistency: derivative of the image along the source flow,
// compared with factor * (target field at the image).
struct PushforwardCheck {
    std::vector<cplx> image_rate;
    std::vector<cplx> target_field;
    cplx factor;
    // max |image_rate - factor * target_field| over the largest entry of either
    double residual;
    // Per component, the same difference over factor * sum_j |dV_i/dx_j x_j| at
    // the image: the rounding scale of V_i when its terms cancel.
    double componentwise;
};

PushforwardCheck pushforward_check(const SystemState &from, SystemId to, const TransformOptions &opt = {},
                                   cplx t = 0.0, std::optional<cplx> factor = std::nullopt);

// Default time-scaling factor d(target time)/d(source time) for a pair.
cplx default_time_factor(const SystemState &from, SystemId to, const TransformOptions &opt, cplx t);

// +root or -root, whichever is nearer to `previous`.
cplx nearest_root(cplx root, cplx previous);

} // namespace modflow

#endif
