#ifndef MODFLOW_CONSERVED_HPP
#define MODFLOW_CONSERVED_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modflow/core.hpp"
#include "modflow/integrate.hpp"
#include "modflow/qseries.hpp"
#include "modflow/report.hpp"
#include "modflow/system.hpp"

namespace modflow
{

struct NamedValue {
    std::string name;
    cplx value;
};

struct IntegralSet {
    SystemTag system{};
    std::vector<NamedValue> algebraic;
    std::vector<NamedValue> transcendental;
    // Companion values that are not integrals (the modulus k^2 recovered
    // from a Jacobi9 state).
    std::vector<NamedValue> derived;

    // Throws ParameterError for an unknown name.
    cplx value(std::string_view name) const;
};

// Remembers the last value of every square root and logarithm taken by the
// transcendental integrals, so consecutive evaluations along a trajectory stay
// on one branch. Without previous values the right-choice root and the
// principal logarithm are used.
class BranchTracker
{
public:
    cplx root(const std::string &key, cplx square);
    cplx log(const std::string &key, cplx w);
    std::optional<cplx> previous(const std::string &key) const;
    void set(const std::string &key, cplx v) { last_[key] = v; }
    void reset() { last_.clear(); }

private:
    std::map<std::string, cplx> last_;
};

// Jacobi9: I2 = a^2 + 32 b, I (derived: k2). Canonical19: piI2 = (y^2 - z^2) / x^2.
// Symmetric8: U. Intermediate25: I. LegendreClosure28: level.
// Other systems have no algebraic integral (empty list).
IntegralSet algebraic_invariants(const SystemState &s);

// (J1, J2) for Jacobi9, Intermediate25, Canonical19, DarbouxHalphen2,
// Ramamani44 and Weierstrass3 (the last two through the Darboux-Halphen
// variables) and HalphenBrioschi57.
IntegralSet transcendental_invariants(const SystemState &s, BranchTracker *tracker = nullptr);

// Canonical19 integrals with analytic gradients. m = z/y; mprime is the
// complementary modulus actually used.
struct CanonicalIntegrals {
    cplx J1, J2;
    cplx K, Kprime, E, Eprime;
    cplx mprime;
    std::array<cplx, 4> dJ1, dJ2;
};
CanonicalIntegrals canonical_integrals(const SystemState &s, BranchTracker *tracker = nullptr);

// Time-normalizing function N = -K(z/y) / (y J1) with dN/dtau = 1.
struct Normalizer {
    cplx N;
    std::array<cplx, 4> grad;
};
Normalizer normalizer_N(const SystemState &s, BranchTracker *tracker = nullptr);

// Integrals of the Intermediate25 system in (A, B, k, I).
struct MixedIntegrals {
    cplx J1, J2, K, Kprime, E, Eprime;
};
MixedIntegrals mixed_integrals(cplx A, cplx B, cplx k, cplx I, std::optional<cplx> kprime = std::nullopt);

// Integrals of the quadratic systems with parameters (a, b, c). With
// `printed_prefactor` the second integral uses C / (z - y)^2 in place of
// 1 / (C (z - y)); the former is not conserved.
std::array<cplx, 2> hb_integrals(const SystemState &s, BranchTracker *tracker = nullptr,
                                 bool printed_prefactor = false);

// Legendre-function candidates for the Weierstrass integrals:
//   J = (g2 w)^{1/3} { F_nu^mu(g3 w) - (g3 - 2/3 eta g2) w F_{-nu}^mu(g3 w) },
//   w = (g3^2 - g2^3 / 27)^{w_exponent}, F = P for J1 and Q for J2.
struct LegendreCandidate {
    double w_exponent = 1.0 / 3.0;
    cplx nu = 0.5;
    cplx mu = 1.0 / 3.0;
};
std::array<cplx, 2> legendre_candidate_values(const SystemState &w3, const LegendreCandidate &p);
// max over J1, J2 of |dJ/dtau| / |J| along the Weierstrass flow.
double legendre_candidate_rate(const SystemState &w3, const LegendreCandidate &p);
struct CandidateScore {
    LegendreCandidate p;
    double rate;
};
// Scans the exponent over {-1/2, 1/3, -1/3, 1/2} and (nu, mu) over small
// rationals; sorted by rate. Candidates that cannot be evaluated are skipped.
std::vector<CandidateScore> legendre_candidate_scan(const SystemState &w3);

// Fills the invariant columns of a trajectory with branch continuity. An
// integral is included when it evaluates at the first sample.
void annotate_invariants(Trajectory &tr, bool transcendental = true);

// Relative drift max_j |I_j - I_0| / max(|I_0|, floor) of every column.
std::vector<std::pair<std::string, double>> invariant_drift(const Trajectory &tr, double floor = 1e-300);

struct IdentityThresholds {
    double relative = 1e-9;
    double legendre = 1e-12;
};

// Theta, eta, modular-form and Legendre identities at tau.
Report identity_report(const Tau &tau, const IdentityThresholds &th = {});

struct OdeThresholds {
    double chazy = 1e-10;
    double c_equation = 1e-9;
    double c_tilde = 1e-8;
    double theta_c = 1e-9;
    double scaling = 1e-12;
};

// Chazy, C-equation, fourth-order C-tilde and scaling rows at a Canonical19
// state. The theta-convention row needs tau.
Report ode_residual_report(const SystemState &canonical, std::optional<Tau> tau = std::nullopt,
                           const OdeThresholds &th = {});

// Residuals of the two candidate Chazy normalizations for u at a Canonical19
// state: u''' = 2 u u'' - 3 u'^2 (classical) and u''' = 6 (2 u u'' - 3 u'^2).
struct ChazyResiduals {
    double classical;
    double printed;
};
ChazyResiduals chazy_residuals(const SystemState &canonical);

// Left side C^4 ((ln C^3 C'')')^2 - 16 C^3 C'' along the Canonical19 flow
// for C = 1 / (component j). `scale` receives the larger of the two terms.
cplx c_equation_value(const SystemState &canonical, int component, double *scale = nullptr);
// d/dtau of the same expression for C = 1 / x.
cplx c_tilde_rate(const SystemState &canonical, double *scale = nullptr);
// Same expression for C = theta_j^{-2} (j = 3 or 4) with tau-derivatives.
cplx theta_c_value(const Tau &tau, int j = 3);

} // namespace modflow

#endif
