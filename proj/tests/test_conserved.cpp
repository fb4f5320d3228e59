#include <gtest/gtest.h>

#include "modflow/conserved.hpp"
#include "modflow/flows.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace modflow;
using modflow::test::Gen;
using S = SystemTag;

namespace
{

// Directional derivative of f along the field, by a Richardson-combined
// central difference.
template <typename F>
cplx along_field(const SystemState &s, F f, double h = 1e-4)
{
    const auto V = vector_field(s);
    auto shifted = [&](double d) {
        SystemState p = s;
        for (std::size_t i = 0; i < p.v.size(); ++i) {
            p.v[i] += d * V[i];
        }
        return f(p);
    };
    const cplx d1 = (shifted(h) - shifted(-h)) / (2.0 * h);
    const cplx d2 = (shifted(h / 2) - shifted(-h / 2)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

} // namespace

TEST(Identities, HoldAtRandomTau)
{
    Gen g(41);
    for (int i = 0; i < 30; ++i) {
        modflow::test::expect_report_passes(identity_report(g.tau()));
    }
}

TEST(Identities, BelowFloorIsAnErrorRow)
{
    const Report r = identity_report(Tau(0.0, 0.01));
    ASSERT_FALSE(r.empty());
    EXPECT_FALSE(all_pass(r));
    EXPECT_EQ(r.front().error, "DomainError");
}

TEST(CanonicalIntegrals, MatchOracle)
{
    for (const auto &c : oracle::canonical_cases) {
        const CanonicalIntegrals v = canonical_integrals(SystemState(S::Canonical19, {c.x, c.y, c.z, c.u}));
        EXPECT_CNEAR(v.J1, c.J1, 1e-12);
        EXPECT_CNEAR(v.J2, c.J2, 1e-12);
    }
}

TEST(CanonicalIntegrals, ConservedAlongTheField)
{
    Gen g(42);
    for (int i = 0; i < 20; ++i) {
        const SystemState s = g.canonical();
        BranchTracker bt;
        const CanonicalIntegrals base = canonical_integrals(s, &bt);
        const auto J = [&](int which) {
            return [&, which](const SystemState &p) {
                BranchTracker local = bt;
                const CanonicalIntegrals c = canonical_integrals(p, &local);
                return which == 1 ? c.J1 : c.J2;
            };
        };
        EXPECT_LT(std::abs(along_field(s, J(1))), 1e-8 * std::max(1.0, std::abs(base.J1)));
        EXPECT_LT(std::abs(along_field(s, J(2))), 1e-8 * std::max(1.0, std::abs(base.J2)));
    }
}

TEST(CanonicalIntegrals, GradientsMatchDifferences)
{
    Gen g(43);
    for (int i = 0; i < 10; ++i) {
        const SystemState s = g.canonical();
        BranchTracker bt;
        const CanonicalIntegrals c = canonical_integrals(s, &bt);
        for (int k = 0; k < 4; ++k) {
            // the integrals vary on the scale |y - z| near m = 1
            const double h = 1e-3 * std::min(1.0, std::abs(s.v[1] - s.v[2]));
            auto at = [&](double d) {
                SystemState p = s;
                p.v[k] += d;
                BranchTracker local = bt;
                return canonical_integrals(p, &local);
            };
            auto diff = [&](double hh, bool second) {
                const cplx a = second ? at(hh).J2 : at(hh).J1, b = second ? at(-hh).J2 : at(-hh).J1;
                return (a - b) / (2.0 * hh);
            };
            const cplx d1 = (4.0 * diff(h / 2, false) - diff(h, false)) / 3.0;
            const cplx d2 = (4.0 * diff(h / 2, true) - diff(h, true)) / 3.0;
            EXPECT_LT(std::abs(d1 - c.dJ1[k]), 1e-6 * std::max(1.0, std::abs(c.dJ1[k])));
            EXPECT_LT(std::abs(d2 - c.dJ2[k]), 1e-6 * std::max(1.0, std::abs(c.dJ2[k])));
        }
    }
}

TEST(CanonicalIntegrals, PairingIdentityPointwise)
{
    Gen g(44);
    for (int i = 0; i < 50; ++i) {
        const SystemState s = g.canonical();
        const CanonicalIntegrals c = canonical_integrals(s);
        EXPECT_LT(rel_residual(c.J1 * c.Kprime - c.J2 * c.K, 1.5 * pi * s.v[1]), 1e-11);
    }
}

TEST(Normalizer, AdvancesWithUnitRate)
{
    Gen g(45);
    for (int i = 0; i < 20; ++i) {
        const SystemState s = g.canonical();
        const Normalizer n = normalizer_N(s);
        const auto V = vector_field(s);
        cplx rate = 0.0;
        for (int k = 0; k < 4; ++k) {
            rate += n.grad[k] * V[k];
        }
        EXPECT_LT(std::abs(rate - 1.0), 1e-10);
    }
}

TEST(AlgebraicInvariants, CanonicalRatioIsConserved)
{
    Gen g(46);
    for (int i = 0; i < 20; ++i) {
        const SystemState s = g.canonical();
        const auto f = [](const SystemState &p) { return algebraic_invariants(p).value("piI2"); };
        EXPECT_LT(std::abs(along_field(s, f)), 1e-8 * std::max(1.0, std::abs(f(s))));
    }
    EXPECT_THROW(algebraic_invariants(g.canonical()).value("nope"), ParameterError);
}

TEST(Drift, IntegralsStayFlatAlongFlows)
{
    Gen g(47);
    for (int i = 0; i < 3; ++i) {
        const Tau tau = g.tau();
        const SystemState s = g.canonical();
        Trajectory tr = integrate(s, {tau.value(), tau.value() + 0.4, false}, 1e-10, 1e-12);
        annotate_invariants(tr);
        ASSERT_FALSE(tr.invariant_names.empty());
        double scale = 1e-300;
        for (const cplx &v : tr.invariants.front()) {
            scale = std::max(scale, std::abs(v));
        }
        for (const auto &[name, d] : invariant_drift(tr, scale)) {
            EXPECT_LT(d, 1e-7) << name;
        }
    }
}

TEST(HalphenBrioschi, IntegralsConservedAndPrintedPrefactorIsNot)
{
    Gen g(48);
    for (int i = 0; i < 10; ++i) {
        const SystemState h(S::HalphenBrioschi57, {g.complex(-0.5, 0.5), g.complex(-0.5, 0.5), g.complex(-0.5, 0.5)});
        BranchTracker bt;
        const auto base = hb_integrals(h, &bt);
        for (int j = 0; j < 2; ++j) {
            const auto f = [&, j](const SystemState &p) {
                BranchTracker local = bt;
                return hb_integrals(p, &local)[j];
            };
            EXPECT_LT(std::abs(along_field(h, f)), 1e-7 * std::max(1.0, std::abs(base[j])));
        }
        const auto printed = [&](const SystemState &p) {
            BranchTracker local = bt;
            return hb_integrals(p, &local, true)[1];
        };
        EXPECT_GT(std::abs(along_field(h, printed)), 1e-4 * std::abs(printed(h)));
    }
}

TEST(Weierstrass, NoLegendreCandidateIsConserved)
{
    const SystemState w3 = transform_state(canonical_state(Tau(0.1, 1.2)), S::Weierstrass3);
    const auto scores = legendre_candidate_scan(w3);
    ASSERT_FALSE(scores.empty());
    EXPECT_GT(scores.front().rate, 1e-3);
    for (std::size_t i = 1; i < scores.size(); ++i) {
        EXPECT_LE(scores[i - 1].rate, scores[i].rate);
    }
}

TEST(Chazy, PrintedNormalizationWins)
{
    Gen g(49);
    for (int i = 0; i < 20; ++i) {
        const ChazyResiduals c = chazy_residuals(g.canonical());
        EXPECT_LT(c.printed, 1e-10);
        EXPECT_GT(c.classical, 1e-3);
    }
}

TEST(OdeResiduals, PassAtThetaAndJitteredStates)
{
    Gen g(50);
    for (int i = 0; i < 10; ++i) {
        const Tau tau = g.tau();
        modflow::test::expect_report_passes(ode_residual_report(canonical_state(tau), tau));
        modflow::test::expect_report_passes(ode_residual_report(g.canonical()));
    }
}

TEST(OdeResiduals, ConstantScalingLaw)
{
    EXPECT_LT(rel_residual(36.0 * std::pow(std::sqrt(pi * I / 6.0), 4), -pi * pi), 1e-15);
    const Tau tau(0.2, 0.9);
    EXPECT_LT(rel_residual(theta_c_value(tau, 3), -pi * pi), 1e-9);
    EXPECT_LT(rel_residual(c_equation_value(canonical_state(tau), 2), 36.0), 1e-9);
}

TEST(BranchTracker, RootsFollowThePreviousValue)
{
    BranchTracker bt;
    const cplx first = bt.root("r", cplx(-1.0, 1e-3));
    EXPECT_GT(first.imag(), 0.0);
    const cplx second = bt.root("r", cplx(-1.0, -1e-3));
    EXPECT_LT(std::abs(second - first), 1e-2);
    const cplx l1 = bt.log("l", cplx(-1.0, 1e-3));
    const cplx l2 = bt.log("l", cplx(-1.0, -1e-3));
    EXPECT_LT(std::abs(l2 - l1), 1e-2);
    bt.reset();
    EXPECT_FALSE(bt.previous("r").has_value());
}
