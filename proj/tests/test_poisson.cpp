#include <gtest/gtest.h>

#include "modflow/poisson.hpp"
#include "support.hpp"

using namespace modflow;
using modflow::test::Gen;
using S = SystemTag;

namespace
{

const std::vector<cplx> lambdas{1.0, -1.0, cplx(2.0, 1.0)};

} // namespace

TEST(Bracket, OmegaGradientReproducesFieldAtFixture)
{
    const SystemState s(S::Canonical19, {1.0, 2.0, 1.0, 0.0});
    const Vec4 f = bracket(s, BracketKind::omega).m * hamiltonian_gradient(s);
    EXPECT_LT((f - Vec4(5.0, 4.0, -7.0, -13.0)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(hamiltonian(s), cplx(1.5));
}

TEST(Bracket, ExactlyAntisymmetric)
{
    Gen g(51);
    for (int i = 0; i < 20; ++i) {
        const SystemState s = g.canonical();
        for (BracketKind k : {BracketKind::omega, BracketKind::omega_tilde, BracketKind::pencil}) {
            const Mat4 m = bracket(s, k, cplx(0.3, -0.7)).m;
            EXPECT_TRUE((m + m.transpose()).isZero(0.0));
        }
    }
}

TEST(Bracket, PencilAtZeroIsOmega)
{
    const SystemState s = Gen(52).canonical();
    EXPECT_TRUE((bracket(s, BracketKind::pencil, 0.0).m - bracket(s, BracketKind::omega).m).isZero(0.0));
}

TEST(Bracket, CasimirsDeterminantsAndCommutation)
{
    Gen g(53);
    for (int i = 0; i < 25; ++i) {
        const SystemState s = g.canonical();
        for (cplx l : lambdas) {
            modflow::test::expect_report_passes(casimir_and_det_check(s, l));
        }
    }
}

TEST(Bracket, PoissonBracketOfCoordinatesIsTheMatrix)
{
    const SystemState s = Gen(54).canonical();
    const BracketMatrix b = bracket(s, BracketKind::omega_tilde);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            EXPECT_EQ(poisson_bracket(observable_coordinate(i), observable_coordinate(j), b, s), b.m(i, j));
        }
    }
}

TEST(Bracket, SingularStatesAreTyped)
{
    EXPECT_THROW(bracket(SystemState(S::Canonical19, {0.0, 1.0, 0.5, 0.0}), BracketKind::omega), SingularState);
    EXPECT_THROW(bracket(SystemState(S::Canonical19, {1.0, 1.0, 1.0, 0.0}), BracketKind::omega), SingularState);
    EXPECT_THROW(hamiltonian(SystemState(S::Canonical19, {0.0, 1.0, 0.5, 0.0})), SingularState);
    EXPECT_THROW(bracket(SystemState(S::Jacobi9, {1.0, 1.0, 1.0, 1.0}), BracketKind::omega), Error);
}

TEST(Bracket, DegeneratesAsXVanishes)
{
    // omega carries x^3, so the bracket shrinks like x^3 while H blows up like x^-2.
    double prev = 1e300;
    for (double x : {1e-1, 1e-2, 1e-3}) {
        const SystemState s(S::Canonical19, {x, 1.0, 0.5, 0.2});
        const double n = bracket(s, BracketKind::omega).m.cwiseAbs().maxCoeff();
        EXPECT_LT(n, prev);
        prev = n;
    }
    EXPECT_LT(prev, 1e-6);
}

TEST(Jacobi, ConstantMatrixHasNoResidual)
{
    Mat4 c = Mat4::Zero();
    c(0, 1) = 2.0;
    c(1, 0) = -2.0;
    c(2, 3) = cplx(0.0, 1.0);
    c(3, 2) = cplx(0.0, -1.0);
    EXPECT_EQ(jacobi_identity_residual([&](const std::vector<cplx> &) { return c; }, {0.1, 0.2, 0.3, 0.4}), 0.0);
}

TEST(Jacobi, NonPoissonMatrixIsDetected)
{
    // {x0, x1} = x2, {x1, x2} = x1: the cyclic sum over (0, 1, 2) is x2.
    const auto b = [](const std::vector<cplx> &x) {
        Mat4 m = Mat4::Zero();
        m(0, 1) = x[2];
        m(1, 0) = -x[2];
        m(1, 2) = x[1];
        m(2, 1) = -x[1];
        return m;
    };
    EXPECT_GT(jacobi_identity_residual(b, {0.3, 0.4, 0.5, 0.6}), 1e-2);
}

TEST(Jacobi, HoldsForTheBracketFamily)
{
    Gen g(55);
    for (int i = 0; i < 5; ++i) {
        modflow::test::expect_report_passes(jacobi_identity_report(g.canonical(), lambdas));
    }
}

TEST(Nambu, ReductionAndVolume)
{
    Gen g(56);
    for (int i = 0; i < 10; ++i) {
        modflow::test::expect_report_passes(nambu_reduce_check(g.canonical()));
    }
}

TEST(Nambu, MatrixIsAntisymmetricAndKillsItsArguments)
{
    const Vec4 a(1.0, cplx(0.0, 2.0), -1.0, 0.5), b(0.3, 1.0, cplx(1.0, 1.0), -2.0);
    const Mat4 m = nambu_matrix(a, b);
    EXPECT_TRUE((m + m.transpose()).isZero(0.0));
    EXPECT_LT((m * a).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((m * b).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Obstruction, NoConstantBracketForTheNonlinearSystems)
{
    for (SystemTag t : {S::Symmetric8, S::Jacobi9, S::Canonical19}) {
        const ObstructionResult r = constant_bracket_obstruction(t, 0xD1CE);
        EXPECT_EQ(r.nullspace_dim, 0) << system_name(t);
        EXPECT_GT(r.min_singular, 1e-6) << system_name(t);
    }
}

TEST(Obstruction, PositiveControlIsFound)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        EXPECT_GE(obstruction_positive_control(seed).nullspace_dim, 1);
    }
}

TEST(Obstruction, ZeroJacobianAdmitsEveryBracket)
{
    const std::vector<MatX> zeros(12, MatX::Zero(4, 4));
    EXPECT_EQ(obstruction_from_jacobians(zeros).nullspace_dim, 6);
    EXPECT_THROW(constant_bracket_obstruction(S::Canonical19, 1, 3), ParameterError);
}

TEST(Transport, StatementFormHoldsAndProofFormDoesNot)
{
    const Tau tau(0.15, 1.1);
    IntegrateOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-13;
    const PathSegment path{tau.value(), tau.value() + 0.2, true};
    const Trajectory coarse = integrate_uniform(canonical_state(tau), path, 64, o);
    const Trajectory fine = integrate_uniform(canonical_state(tau), path, 128, o);
    const TransportResult a = bracket_transport_residual(coarse), b = bracket_transport_residual(fine);
    EXPECT_LT(b.statement, 1e-6);
    EXPECT_GT(b.proof, 1e-2);
    EXPECT_LT(b.statement / a.statement, 0.5);
    for (cplx l : lambdas) {
        EXPECT_LT(bracket_transport_residual(fine, l).statement, 1e-6);
    }
}

TEST(Pushforward, FieldAndDeterminant)
{
    Gen g(57);
    for (int i = 0; i < 10; ++i) {
        const PushforwardBracket p = pushforward_bracket(g.canonical());
        EXPECT_LT(p.field_residual, 1e-10);
        EXPECT_LT(p.det_residual, 1e-9);
        EXPECT_TRUE((p.bracket.m + p.bracket.m.transpose()).isZero(0.0));
    }
}

TEST(Lagrangian, SecondOrderResidualAndTotalDerivative)
{
    const Tau tau(-0.2, 0.9);
    const LagrangianResult O = lagrangian_residual(canonical_state(tau), tau.value(), tau.value() + 0.2, 50);
    EXPECT_LT(O.fine, 1e-3);
    EXPECT_LT(O.fine / O.coarse, 1.0 / 3.5);
    const LagrangianResult L = lagrangian_residual(canonical_state(tau), tau.value(), tau.value() + 0.2, 200);
    EXPECT_LT(L.total_derivative_shift, 1e-8);
    EXPECT_LT(L.lines_agree, 1e-10);
    EXPECT_LT(L.onshell_vs_total_derivative, 1e-7);
    EXPECT_GT(L.onshell_vs_minus_J1sq, 1e-2);
}

TEST(Scaling, SymmetryRows)
{
    Gen g(58);
    for (int i = 0; i < 10; ++i) {
        modflow::test::expect_report_passes(scaling_symmetry_check(g.canonical()));
    }
}
