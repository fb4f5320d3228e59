#ifndef MODFLOW_POISSON_HPP
#define MODFLOW_POISSON_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modflow/conserved.hpp"
#include "modflow/flows.hpp"
#include "modflow/integrate.hpp"
#include "modflow/report.hpp"

namespace modflow
{

using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;

enum class BracketKind { omega, omega_tilde, pencil, pushforward, nambu_reduced };

struct BracketMatrix {
    Mat4 m = Mat4::Zero();
    BracketKind kind = BracketKind::omega;
    cplx lambda = 0.0;
};

// Hamiltonian H = (y^2 - z^2) / (2 x^2) of the canonical system.
cplx hamiltonian(const SystemState &s);
Vec4 hamiltonian_gradient(const SystemState &s);

// omega (rational, degenerate), omega_tilde (transcendental, built from
// K(z/y), E(z/y)) and the pencil omega + lambda omega_tilde, at a Canonical19
// state. The tracker fixes the branch of the complementary modulus.
BracketMatrix bracket(const SystemState &s, BracketKind kind, cplx lambda = 0.0, BranchTracker *tracker = nullptr);

struct Observable {
    std::string name;
    std::function<cplx(const SystemState &)> value;
    // Analytic gradient if available; otherwise central differences.
    std::function<Vec4(const SystemState &)> grad;

    Vec4 gradient(const SystemState &s) const;
};

Observable observable_hamiltonian();
Observable observable_J1();
Observable observable_J2();
Observable observable_N();
Observable observable_inverse_J1(cplx lambda);  // (lambda J1)^{-1}
Observable observable_coordinate(int j);

// grad(f)^T b grad(g)
cplx poisson_bracket(const Observable &f, const Observable &g, const BracketMatrix &b, const SystemState &s);

struct PoissonThresholds {
    double field = 1e-12;
    double casimir = 1e-9;
    double det = 1e-9;
    double commutation = 1e-9;
    double inverse = 1e-8;
    double jacobi = 1e-5;
    double nambu = 1e-8;
};

// Hamiltonian form, Casimirs, determinants and the commutation relations.
Report casimir_and_det_check(const SystemState &s, cplx lambda, const PoissonThresholds &th = {});

// max over (i, j, k) of |sum_cyclic b^{il} d_l b^{jk}| with Richardson-refined
// central differences of step h.
double jacobi_identity_residual(const std::function<Mat4(const std::vector<cplx> &)> &b_field,
                                const std::vector<cplx> &x, double h = 1e-6);

// Jacobi-identity rows for omega, omega_tilde and the pencil at each lambda.
Report jacobi_identity_report(const SystemState &s, const std::vector<cplx> &lambdas, double threshold = 1e-5);

// (2/pi) x^3 y z eps^{jkln} dJ1_l dJ2_n against omega, and the 4-bracket
// with the normalization sqrt(det Omega).
Report nambu_reduce_check(const SystemState &s, cplx lambda = 1.0, const PoissonThresholds &th = {});
// eps^{jkln} a_l b_n
Mat4 nambu_matrix(const Vec4 &a, const Vec4 &b);

// Constant antisymmetric P with P W(X) symmetric at every sample: the
// dimension of the solution space.
struct ObstructionResult {
    int nullspace_dim = 0;
    double min_singular = 0.0;  // smallest singular value / largest
    int samples = 0;
};
ObstructionResult obstruction_from_jacobians(const std::vector<MatX> &jacobians, double tol = 1e-6);
ObstructionResult constant_bracket_obstruction(SystemId sys, std::uint64_t seed, int samples = 16);
// Linear field x' = Omega0 S x with Omega0 constant antisymmetric and S
// symmetric: it admits a constant bracket, so the harness must find one.
ObstructionResult obstruction_positive_control(std::uint64_t seed, int samples = 16);

// Residuals of d Omega / d tau against W Omega + Omega W^T (statement form)
// and -Omega W - W^T Omega (proof form), with Omega = omega + lambda
// omega_tilde differentiated along a uniform trajectory by five-point
// central differences.
struct TransportResult {
    double statement = 0.0;
    double proof = 0.0;
    double step = 0.0;
};
TransportResult bracket_transport_residual(const Trajectory &uniform_traj, cplx lambda = 0.0);

// Pushforward of omega to Jacobi coordinates.
struct PushforwardBracket {
    BracketMatrix bracket;
    MatX T;
    double field_residual;  // |Y' - Omega~ grad_Y H| relative
    double det_residual;    // Pf of the pushed pencil against det(T) Pf, over the size of its terms
};
PushforwardBracket pushforward_bracket(const SystemState &s, cplx det_lambda = 1.0);

// Euler-Lagrange residuals of the mixed-variable Lagrangian.
struct LagrangianResult {
    double coarse = 0.0;
    double fine = 0.0;
    double ratio = 0.0;
    double total_derivative_shift = 0.0;  // change of the fine residual when the total derivative is kept
    double lines_agree = 0.0;             // both displayed forms at an arbitrary velocity
    double onshell_vs_total_derivative = 0.0;  // L on-shell against -8 d(B K^2 / A)/dtau
    double onshell_vs_minus_J1sq = 0.0;        // L on-shell against -J1^2
};
// Integrates Canonical19 from `s` over [t0, t1] on uniform grids of n and 2n
// intervals and maps to (A, B, k, I).
LagrangianResult lagrangian_residual(const SystemState &s, cplx t0, cplx t1, int n = 200);
// Residual on an already mapped uniform trajectory in (A, B, k, I).
double lagrangian_el_residual(const std::vector<std::array<cplx, 4>> &mixed, cplx step, bool with_total_derivative);

Report scaling_symmetry_check(const SystemState &s, double threshold = 1e-8);

} // namespace modflow

#endif
