#include <gtest/gtest.h>

#include "modflow/elliptic.hpp"
#include "modflow/flows.hpp"
#include "modflow/qseries.hpp"
#include "support.hpp"

using namespace modflow;
using modflow::test::Gen;
using S = SystemTag;

TEST(Flows, CanonicalFieldFixture)
{
    const auto v = vector_field(SystemState(S::Canonical19, {1.0, 2.0, 1.0, 0.0}));
    EXPECT_EQ(v, (std::vector<cplx>{5.0, 4.0, -7.0, -13.0}));
}

TEST(Flows, StateLengthIsChecked)
{
    EXPECT_THROW(SystemState(S::Canonical19, {1.0, 2.0, 3.0}), ParameterError);
    EXPECT_THROW(SystemState(S::DarbouxHalphen2, {1.0, 2.0, 3.0, 4.0}), ParameterError);
}

TEST(Flows, SystemNamesRoundTrip)
{
    for (SystemTag t : all_systems) {
        EXPECT_EQ(parse_system(system_name(t)), t);
    }
    EXPECT_FALSE(parse_system("canonical20").has_value());
}

TEST(Flows, JacobianMatchesDifferences)
{
    Gen g(31);
    for (SystemTag t : all_systems) {
        if (t == S::LegendreClosure28) {
            continue;
        }
        const int n = system_dimension(t);
        std::vector<cplx> x(static_cast<std::size_t>(n));
        for (auto &c : x) {
            c = g.complex(-1.0, 1.0);
        }
        const SystemState s(t, x);
        const MatX W = jacobian(s);
        const double h = 1e-6;
        for (int k = 0; k < n; ++k) {
            SystemState p = s, m = s;
            p.v[k] += h;
            m.v[k] -= h;
            const auto fp = vector_field(p), fm = vector_field(m);
            for (int j = 0; j < n; ++j) {
                EXPECT_LT(std::abs((fp[j] - fm[j]) / (2.0 * h) - W(j, k)), 1e-6 * std::max(1.0, std::abs(W(j, k))))
                    << system_name(t);
            }
        }
    }
}

TEST(Flows, LieDerivativesMatchTaylor)
{
    const SystemState s(S::DarbouxHalphen2, {0.3, -0.2, 0.5});
    const auto d = lie_derivatives(s, 0, 2);
    const auto V = vector_field(s);
    EXPECT_CNEAR(d[0], V[0], 1e-15);
    const MatX W = jacobian(s);
    cplx second = 0.0;
    for (int k = 0; k < 3; ++k) {
        second += W(0, k) * V[k];
    }
    EXPECT_CNEAR(d[1], second, 1e-14);
}

TEST(Flows, PushforwardsIntertwineFields)
{
    Gen g(32);
    for (int i = 0; i < 20; ++i) {
        const SystemState c = g.canonical();
        for (SystemTag to : {S::DarbouxHalphen2, S::Jacobi9, S::Intermediate25, S::Ramamani44, S::Weierstrass3}) {
            EXPECT_LT(pushforward_check(c, to).residual, 1e-10) << system_name(to);
        }
        const SystemState j9 = transform_state(c, S::Jacobi9);
        EXPECT_LT(pushforward_check(j9, S::Canonical19).residual, 1e-10);
        EXPECT_LT(pushforward_check(j9, S::Intermediate25).residual, 1e-10);
        const SystemState i25 = transform_state(c, S::Intermediate25);
        EXPECT_LT(pushforward_check(i25, S::Jacobi9).residual, 1e-10);
        EXPECT_LT(pushforward_check(i25, S::Canonical19).residual, 1e-10);
        const SystemState dh = transform_state(c, S::DarbouxHalphen2);
        EXPECT_LT(pushforward_check(dh, S::Ramamani44).residual, 1e-10);
        EXPECT_LT(pushforward_check(dh, S::Weierstrass3).residual, 1e-10);
        EXPECT_LT(pushforward_check(transform_state(c, S::Ramamani44), S::DarbouxHalphen2).residual, 1e-10);
    }
}

TEST(Flows, SymmetricToCanonical)
{
    Gen g(33);
    for (int i = 0; i < 10; ++i) {
        EXPECT_LT(pushforward_check(symmetric_state(g.tau()), S::Canonical19).residual, 1e-10);
    }
}

TEST(Flows, LegendreClosureToJacobiWithTimeFactor)
{
    const cplx k(0.3, 0.2);
    const LegendreQuad q = legendre_quad(Modulus(k));
    const SystemState lc(S::LegendreClosure28, {q.K, q.Kprime, q.E, q.Eprime});
    EXPECT_LT(pushforward_check(lc, S::Jacobi9, {}, k).residual, 1e-10);
}

// Inverse maps recover square roots; some choice of signs gives back the start.
double best_return(const SystemState &image, const SystemState &start)
{
    double best = 1e300;
    for (int bits = 0; bits < 32; ++bits) {
        const auto pick = [&](int j) { return (bits >> j) & 1 ? Branch::minus : Branch::plus; };
        TransformOptions o;
        o.ic = pick(0);
        o.y = pick(1);
        o.z = pick(2);
        o.jacobi_i = pick(3);
        o.jacobi_k = pick(4);
        best = std::min(best, modflow::test::rel(transform_state(image, S::Canonical19, o).v, start.v));
    }
    return best;
}

TEST(Flows, RoundTrips)
{
    Gen g(34);
    for (int i = 0; i < 10; ++i) {
        const SystemState c = g.canonical();
        EXPECT_LT(best_return(transform_state(c, S::Intermediate25), c), 1e-13);
        EXPECT_LT(best_return(transform_state(c, S::Jacobi9), c), 1e-13);
        TransformOptions o;
        o.x = c.v[0];
        const SystemState dh = transform_state(c, S::DarbouxHalphen2);
        EXPECT_LT(modflow::test::rel(transform_state(dh, S::Canonical19, o).v, c.v), 1e-12);
        const SystemState w = transform_state(dh, S::Weierstrass3);
        TransformOptions r;
        r.reference = std::array<cplx, 3>{dh.v[0], dh.v[1], dh.v[2]};
        EXPECT_LT(modflow::test::rel(transform_state(w, S::DarbouxHalphen2, r).v, dh.v), 1e-10);
        const SystemState rm = transform_state(dh, S::Ramamani44);
        const SystemState back = transform_state(rm, S::DarbouxHalphen2);
        TransformOptions other;
        other.ramamani_root = Branch::minus;
        const SystemState back2 = transform_state(rm, S::DarbouxHalphen2, other);
        EXPECT_LT(std::min(modflow::test::rel(back.v, dh.v), modflow::test::rel(back2.v, dh.v)), 1e-10);
    }
}

TEST(Flows, SingularTransforms)
{
    EXPECT_THROW(transform_state(SystemState(S::Canonical19, {0.0, 1.0, 0.5, 0.0}), S::Jacobi9), SingularTransform);
    EXPECT_THROW(transform_state(SystemState(S::Canonical19, {1.0, 1.0, 1.0, 0.0}), S::Jacobi9), SingularTransform);
    EXPECT_THROW(transform_state(SystemState(S::DarbouxHalphen2, {1.0, 2.0, 3.0}), S::Canonical19), ParameterError);
    EXPECT_FALSE(transform_supported(S::HalphenBrioschi57, S::Canonical19));
    EXPECT_THROW(transform_state(SystemState(S::HalphenBrioschi57, {1.0, 2.0, 3.0}), S::Canonical19),
                 UnsupportedSystem);
}

TEST(Flows, NearestRoot)
{
    EXPECT_EQ(nearest_root(cplx(1.0, 1.0), cplx(-1.0, -0.9)), cplx(-1.0, -1.0));
    EXPECT_EQ(nearest_root(cplx(1.0, 1.0), cplx(0.9, 1.0)), cplx(1.0, 1.0));
}
