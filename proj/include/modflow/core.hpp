#ifndef MODFLOW_CORE_HPP
#define MODFLOW_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modflow
{

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Imaginary-part floor for every q-series evaluation. Below it the nome is too
// close to the unit circle to keep ~16 digits.
inline constexpr double im_floor = 0.05;

enum class ErrorKind {
    domain,
    branch,
    singular_modulus,
    parameter,
    cut,
    no_convergence,
    singular_transform,
    unsupported_system,
    step_underflow,
    domain_escape,
    singular_state,
    resampling,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Base of every typed failure raised by the library.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define MODFLOW_DEFINE_ERROR(Name, Kind)                                                           \
    class Name : public Error                                                                      \
    {                                                                                              \
    public:                                                                                        \
        explicit Name(const std::string &what) : Error(ErrorKind::Kind, what) {}                   \
    }

MODFLOW_DEFINE_ERROR(DomainError, domain);
MODFLOW_DEFINE_ERROR(BranchError, branch);
MODFLOW_DEFINE_ERROR(SingularModulus, singular_modulus);
MODFLOW_DEFINE_ERROR(ParameterError, parameter);
MODFLOW_DEFINE_ERROR(CutError, cut);
MODFLOW_DEFINE_ERROR(NoConvergence, no_convergence);
MODFLOW_DEFINE_ERROR(SingularTransform, singular_transform);
MODFLOW_DEFINE_ERROR(UnsupportedSystem, unsupported_system);
MODFLOW_DEFINE_ERROR(DomainEscape, domain_escape);
MODFLOW_DEFINE_ERROR(SingularState, singular_state);
MODFLOW_DEFINE_ERROR(ResamplingError, resampling);

#undef MODFLOW_DEFINE_ERROR

// Carries the last independent-variable value reached before the step size
// collapsed.
class StepUnderflow : public Error
{
public:
    StepUnderflow(const std::string &what, cplx last_good)
        : Error(ErrorKind::step_underflow, what), last_good_(last_good)
    {
    }
    cplx last_good() const noexcept { return last_good_; }

private:
    cplx last_good_;
};

// Explicit choice of square-root branch. `unspecified` is rejected wherever a
// root is actually taken.
enum class Branch { unspecified, plus, minus };

inline double sign_of(Branch b)
{
    if (b == Branch::unspecified) {
        throw BranchError("square-root branch left unspecified");
    }
    return b == Branch::plus ? 1.0 : -1.0;
}

// Square root with non-negative real part; on the imaginary axis the root with
// positive imaginary part wins.
inline cplx right_sqrt(cplx w)
{
    cplx r = std::sqrt(w);
    if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) {
        r = -r;
    }
    return r;
}

inline bool is_finite(cplx z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// |a - b| / max(|a|, |b|, floor)
inline double rel_diff(cplx a, cplx b, double floor = 1e-300)
{
    const double scale = std::max({std::abs(a), std::abs(b), floor});
    return std::abs(a - b) / scale;
}

} // namespace modflow

#endif
