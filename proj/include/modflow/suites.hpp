#ifndef MODFLOW_SUITES_HPP
#define MODFLOW_SUITES_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "modflow/conserved.hpp"
#include "modflow/poisson.hpp"
#include "modflow/qseries.hpp"
#include "modflow/report.hpp"

namespace modflow
{

// Shared configuration of the randomized suites.
struct SuiteConfig {
    std::uint64_t seed = 0xD1CE;
    int samples = 0;  // 0 selects the suite's default
    double re_lo = -1.0, re_hi = 1.0;
    double im_lo = 0.4, im_hi = 3.0;
    double rtol = 1e-10;
    double atol = 1e-12;

    // Throws ParameterError on an empty or inadmissible region, a negative
    // sample count or tolerances outside [1e-13, 1e-6].
    void validate() const;
    int count(int fallback) const { return samples > 0 ? samples : fallback; }
};

Tau random_tau(Rng &rng, const SuiteConfig &cfg);

// Theta-generated Canonical19 state at a random tau, with a random real
// translation of tau and a random scale eps.
SystemState random_canonical(Rng &rng, const SuiteConfig &cfg);

// Per check name, the largest residual over all reports (first-seen order).
// An error row anywhere makes the merged row an error row.
Report merge_max(const std::vector<Report> &reports);

// A pass/fail fact as a row: residual 0 when true, 1 otherwise.
ReportRow bool_row(std::string check, bool ok);

// A measured discrepancy kept for the record. The threshold is infinite, so
// the row passes whenever the value is finite.
ReportRow measured_row(std::string check, double value);

Report identities_suite(const SuiteConfig &cfg);
Report brackets_suite(const SuiteConfig &cfg);
Report obstruction_suite(const SuiteConfig &cfg);
Report transport_suite(const SuiteConfig &cfg);
Report lagrangian_suite(const SuiteConfig &cfg);
Report nambu_suite(const SuiteConfig &cfg);
Report ramamani_suite(const SuiteConfig &cfg);
Report chazy_suite(const SuiteConfig &cfg);

// Flow against the closed forms, and the drift of every first integral.
Report closed_form_suite(const SuiteConfig &cfg);
Report drift_suite(const SuiteConfig &cfg);

inline constexpr std::string_view suite_names[] = {"identities", "brackets", "obstruction", "transport",
                                                   "lagrangian", "nambu",    "ramamani",    "chazy"};

// Throws ParameterError on an unknown name.
Report run_suite(std::string_view name, const SuiteConfig &cfg);

} // namespace modflow

#endif
