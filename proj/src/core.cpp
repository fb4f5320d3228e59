#include "modflow/core.hpp"

namespace modflow
{

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::domain: return "DomainError";
    case ErrorKind::branch: return "BranchError";
    case ErrorKind::singular_modulus: return "SingularModulus";
    case ErrorKind::parameter: return "ParameterError";
    case ErrorKind::cut: return "CutError";
    case ErrorKind::no_convergence: return "NoConvergence";
    case ErrorKind::singular_transform: return "SingularTransform";
    case ErrorKind::unsupported_system: return "UnsupportedSystem";
    case ErrorKind::step_underflow: return "StepUnderflow";
    case ErrorKind::domain_escape: return "DomainEscape";
    case ErrorKind::singular_state: return "SingularState";
    case ErrorKind::resampling: return "ResamplingError";
    }
    return "Error";
}

} // namespace modflow
