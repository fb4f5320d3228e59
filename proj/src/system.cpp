#include "modflow/system.hpp"

#include <string>

namespace modflow
{

namespace
{
constexpr std::array<std::string_view, 9> names{
    "symmetric8", "jacobi9",        "canonical19", "intermediate25",     "legendre28",
    "darboux_halphen2", "weierstrass3", "ramamani44", "halphen_brioschi57",
};
} // namespace

std::string_view system_name(SystemTag tag) noexcept { return names[static_cast<std::size_t>(tag)]; }

std::optional<SystemTag> parse_system(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return all_systems[i];
        }
    }
    return std::nullopt;
}

int system_dimension(SystemTag tag) noexcept
{
    switch (tag) {
    case SystemTag::DarbouxHalphen2:
    case SystemTag::Weierstrass3:
    case SystemTag::Ramamani44:
    case SystemTag::HalphenBrioschi57: return 3;
    default: return 4;
    }
}

HBCoefficients hb_coefficients(const HBParams &p) noexcept
{
    const cplx a = p.a, b = p.b, c = p.c;
    return {(a * c + b * c - 2.0 * a * b - c) / 4.0, (a * a + b * b - a * c - b * c + c - 1.0) / 4.0,
            (c * c + 2.0 * a * b - a * c - b * c - c) / 4.0};
}

SystemState::SystemState(SystemId id, std::vector<cplx> values) : system(id), v(std::move(values))
{
    if (static_cast<int>(v.size()) != system.dimension()) {
        throw ParameterError("state for " + std::string(system_name(id.tag)) + " needs " +
                             std::to_string(system.dimension()) + " components, got " +
                             std::to_string(v.size()));
    }
}

} // namespace modflow
