#ifndef MODFLOW_TEST_SUPPORT_HPP
#define MODFLOW_TEST_SUPPORT_HPP

#include <algorithm>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "modflow/report.hpp"
#include "modflow/suites.hpp"

namespace modflow::test
{

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline double rel(const std::vector<cplx> &a, const std::vector<cplx> &b)
{
    double e = 0.0, s = 1e-300;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e = std::max(e, std::abs(a[i] - b[i]));
        s = std::max({s, std::abs(a[i]), std::abs(b[i])});
    }
    return e / s;
}

#define EXPECT_CNEAR(a, b, tol) EXPECT_LT(::modflow::test::rel((a), (b)), (tol)) << (a) << " vs " << (b)

// Generators for property tests: seeded, so failures reproduce.
struct Gen {
    Rng rng;
    SuiteConfig cfg;

    explicit Gen(std::uint64_t seed) : rng(seed) {}
    Tau tau() { return random_tau(rng, cfg); }
    SystemState canonical() { return random_canonical(rng, cfg); }
    cplx complex(double lo, double hi) { return rng.uniform_complex(lo, hi); }
    double real(double lo, double hi) { return rng.uniform(lo, hi); }
    // Modulus away from 0, +-1 and the cut of the principal k'.
    cplx modulus()
    {
        while (true) {
            const cplx k = complex(-0.9, 0.9);
            if (std::abs(k) > 0.05 && std::abs(1.0 - k * k) > 0.1 && std::abs(k.imag()) > 0.02) {
                return k;
            }
        }
    }
};

inline void expect_report_passes(const Report &r)
{
    for (const ReportRow &row : r) {
        EXPECT_TRUE(row.pass) << row.check << " residual " << row.residual << " threshold " << row.threshold << " "
                              << row.error;
    }
}

} // namespace modflow::test

#endif
