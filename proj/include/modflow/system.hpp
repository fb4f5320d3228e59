#ifndef MODFLOW_SYSTEM_HPP
#define MODFLOW_SYSTEM_HPP

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "modflow/core.hpp"

namespace modflow
{

// Component order of each system:
//   Symmetric8         (theta2, theta3, theta4, eta)          time tau
//   Jacobi9            (A, B, a, b)                           time h
//   Canonical19        (x, y, z, u)                           time tau
//   Intermediate25     (A, B, k, I)                           time h
//   LegendreClosure28  (K, K', E, E')                         time k
//   DarbouxHalphen2    (X, Y, Z)                              time tau
//   Weierstrass3       (g2, g3, eta)                          time tau
//   Ramamani44         (P, Pt, Q)                             time tau
//   HalphenBrioschi57  (x, y, z)                              time tau
enum class SystemTag {
    Symmetric8,
    Jacobi9,
    Canonical19,
    Intermediate25,
    LegendreClosure28,
    DarbouxHalphen2,
    Weierstrass3,
    Ramamani44,
    HalphenBrioschi57,
};

inline constexpr std::array<SystemTag, 9> all_systems{
    SystemTag::Symmetric8,      SystemTag::Jacobi9,           SystemTag::Canonical19,
    SystemTag::Intermediate25,  SystemTag::LegendreClosure28, SystemTag::DarbouxHalphen2,
    SystemTag::Weierstrass3,    SystemTag::Ramamani44,        SystemTag::HalphenBrioschi57,
};

std::string_view system_name(SystemTag tag) noexcept;
std::optional<SystemTag> parse_system(std::string_view name) noexcept;
int system_dimension(SystemTag tag) noexcept;

// Hypergeometric parameters (a, b, c) and the quadratic-form coefficients
// derived from them.
struct HBParams {
    cplx a{1.0 / 6.0}, b{1.0 / 3.0}, c{0.5};
};

struct HBCoefficients {
    cplx a, b, c;
};

HBCoefficients hb_coefficients(const HBParams &p) noexcept;

struct SystemId {
    SystemTag tag = SystemTag::Canonical19;
    HBParams hb{};

    SystemId() = default;
    SystemId(SystemTag t) : tag(t) {}
    SystemId(SystemTag t, HBParams p) : tag(t), hb(p) {}
    static SystemId halphen_brioschi(cplx a, cplx b, cplx c) { return {SystemTag::HalphenBrioschi57, {a, b, c}}; }

    // Always recomputed from hb.
    HBCoefficients coefficients() const noexcept { return hb_coefficients(hb); }
    int dimension() const noexcept { return system_dimension(tag); }
};

struct SystemState {
    SystemId system;
    std::vector<cplx> v;

    SystemState() = default;
    // Throws ParameterError on a length mismatch.
    SystemState(SystemId id, std::vector<cplx> values);

    SystemTag tag() const noexcept { return system.tag; }
    cplx operator[](std::size_t i) const { return v[i]; }
};

} // namespace modflow

#endif
