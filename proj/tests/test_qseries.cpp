#include <gtest/gtest.h>

#include "modflow/conserved.hpp"
#include "modflow/qseries.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace modflow;
using modflow::test::Gen;

TEST(QSeries, ThetaAndEtaMatchOracle)
{
    for (const auto &c : oracle::theta_cases) {
        const ThetaQuad q = theta_quad(Tau(c.tau));
        EXPECT_CNEAR(q.theta2(), c.theta2, 1e-13);
        EXPECT_CNEAR(q.theta3(), c.theta3, 1e-13);
        EXPECT_CNEAR(q.theta4(), c.theta4, 1e-13);
        EXPECT_CNEAR(q.eta(), c.eta, 1e-12);
    }
}

TEST(QSeries, ModularFormsMatchEisensteinOracle)
{
    for (const auto &c : oracle::theta_cases) {
        const ModularForms f = modular_forms(theta_quad(Tau(c.tau)));
        EXPECT_CNEAR(f.g2, c.g2, 1e-12);
        // g3 vanishes at tau = i
        if (std::abs(c.g3) > 1e-20) {
            EXPECT_CNEAR(f.g3, c.g3, 1e-11);
        } else {
            EXPECT_LT(std::abs(f.g3), 1e-12);
        }
    }
}

TEST(QSeries, JacobiQuarticAtTauI)
{
    const ThetaQuad q = theta_quad(Tau(0.0, 1.0));
    const cplx r = std::pow(q.theta3(), 4) - std::pow(q.theta2(), 4) - std::pow(q.theta4(), 4);
    EXPECT_LT(std::abs(r), 1e-13);
}

TEST(QSeries, BelowFloorIsDomainError)
{
    EXPECT_THROW(theta_quad(Tau(0.0, 0.01)), DomainError);
    EXPECT_THROW(theta_quad(Tau(0.0, -1.0)), DomainError);
    EXPECT_THROW(theta_quad(Tau(0.0, 0.0)), DomainError);
    EXPECT_NO_THROW(theta_quad(Tau(0.0, 0.06)));
}

TEST(QSeries, MoebiusDeterminantIsEnforced)
{
    ClosedFormParams p;
    p.m = {2.0, 0.0, 0.0, 1.0};
    EXPECT_THROW(closed_form_state(SystemTag::Canonical19, cplx(0.0, 1.0), p), ParameterError);
}

TEST(QSeries, IdentityPropertiesAtRandomTau)
{
    Gen g(11);
    for (int i = 0; i < 40; ++i) {
        modflow::test::expect_report_passes(identity_report(g.tau()));
    }
}

TEST(QSeries, DerivativeOrdersAgreeWithDifferences)
{
    Gen g(12);
    for (int i = 0; i < 10; ++i) {
        const Tau t = g.tau();
        const ThetaQuad q = theta_quad(t, 1);
        const double h = 1e-5;
        const ThetaQuad p = theta_quad(Tau(t.value() + h)), m = theta_quad(Tau(t.value() - h));
        for (int j = 0; j < 4; ++j) {
            const cplx fd = (p.at(0, j) - m.at(0, j)) / (2.0 * h);
            EXPECT_LT(std::abs(fd - q.at(1, j)), 1e-7 * std::max(1.0, std::abs(q.at(1, j))));
        }
    }
}

TEST(QSeries, DuplicationRules)
{
    Gen g(13);
    for (int i = 0; i < 20; ++i) {
        const Tau t = g.tau();
        const ThetaQuad q = theta_quad(t);
        const ModularForms f = modular_forms(q);
        const Duplication d = duplication_values(q, q.eta(), f.g2);
        const ThetaQuad q2 = theta_quad(Tau(2.0 * t.value()));
        EXPECT_CNEAR(d.eta_2tau, q2.eta(), 1e-12);
        EXPECT_CNEAR(d.g2_2tau, modular_forms(q2).g2, 1e-12);
    }
}

TEST(QSeries, ClosedFormCanonicalIsThetaScaled)
{
    const Tau t(0.3, 0.8);
    const ThetaQuad q = theta_quad(t);
    const SystemState s = canonical_state(t);
    const cplx c = std::sqrt(pi * I / 6.0);
    EXPECT_CNEAR(s.v[1], c * q.theta3() * q.theta3(), 1e-15);
    EXPECT_CNEAR(s.v[2], c * q.theta4() * q.theta4(), 1e-15);
    EXPECT_CNEAR(s.v[3], 2.0 * I / pi * q.eta(), 1e-15);
}
