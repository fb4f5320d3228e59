#include "modflow/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "modflow/flows.hpp"

namespace modflow
{

namespace
{

constexpr double min_sigma_step = 1e-12;

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

using Vec = std::vector<cplx>;

Vec axpy(const Vec &y, double h, std::initializer_list<std::pair<double, const Vec *>> terms)
{
    Vec out = y;
    for (std::size_t i = 0; i < out.size(); ++i) {
        cplx acc = 0.0;
        for (const auto &[w, k] : terms) {
            acc += w * (*k)[i];
        }
        out[i] += h * acc;
    }
    return out;
}

bool finite_state(const Vec &v)
{
    return std::all_of(v.begin(), v.end(), [](cplx c) { return is_finite(c) && std::abs(c) < 1e150; });
}

class Stepper
{
public:
    Stepper(const SystemId &id, const PathSegment &p, const IntegrateOptions &o) : id_(id), path_(p), opt_(o) {}

    Vec rhs(double sigma, const Vec &x)
    {
        ++evals;
        const cplx dt = path_.t1 - path_.t0;
        Vec f = field<cplx>(id_, x, path_.t0 + sigma * dt);
        for (auto &c : f) {
            c *= dt;
        }
        return f;
    }

    // Error norm over the doubled real system.
    double error_norm(const Vec &y, const Vec &yn, const Vec &err) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double sr = opt_.atol + opt_.rtol * std::max(std::abs(y[i].real()), std::abs(yn[i].real()));
            const double si = opt_.atol + opt_.rtol * std::max(std::abs(y[i].imag()), std::abs(yn[i].imag()));
            sum += std::pow(err[i].real() / sr, 2) + std::pow(err[i].imag() / si, 2);
        }
        return std::sqrt(sum / (2.0 * y.size()));
    }

    int evals = 0;

private:
    SystemId id_;
    PathSegment path_;
    IntegrateOptions opt_;
};

void validate(const SystemState &init, const PathSegment &path, const IntegrateOptions &opt)
{
    if (!(opt.rtol >= 1e-13 && opt.rtol <= 1e-6) || !(opt.atol >= 1e-13 && opt.atol <= 1e-6)) {
        throw ParameterError("tolerances must lie in [1e-13, 1e-6]");
    }
    if (!is_finite(path.t0) || !is_finite(path.t1) || path.t0 == path.t1) {
        throw ParameterError("path endpoints must be finite and distinct");
    }
    if (path.upper_half_plane && (path.t0.imag() <= im_floor || path.t1.imag() <= im_floor)) {
        throw DomainError("path leaves the region Im t > " + std::to_string(im_floor));
    }
    if (!finite_state(init.v)) {
        throw DomainEscape("initial state is not finite");
    }
    if (opt.min_interior < 1 || opt.max_steps < 1) {
        throw ParameterError("min_interior and max_steps must be positive");
    }
}

} // namespace

Trajectory integrate(const SystemState &init, const PathSegment &path, const IntegrateOptions &opt)
{
    validate(init, path, opt);
    Stepper st(init.system, path, opt);
    const cplx dt = path.t1 - path.t0;
    const double hmax = 1.0 / (opt.min_interior + 1);

    Trajectory tr;
    tr.system = init.system;
    tr.samples.push_back({path.t0, init.v, 0.0});

    Vec y = init.v;
    double sigma = 0.0;
    Vec k1 = st.rhs(0.0, y);
    double h = std::min(hmax, 0.01);
    double err_prev = 1e-4;
    constexpr double beta = 0.04, alpha = 0.2 - 0.75 * beta, safety = 0.9;

    while (sigma < 1.0) {
        const bool last = sigma + h >= 1.0 - 1e-14;
        if (last) {
            h = 1.0 - sigma;
        }
        if (tr.stats.accepted + tr.stats.rejected >= opt.max_steps) {
            throw NoConvergence("step budget of " + std::to_string(opt.max_steps) + " exhausted");
        }
        if (h < min_sigma_step) {
            throw StepUnderflow("step size collapsed", path.t0 + sigma * dt);
        }
        const Vec k2 = st.rhs(sigma + c2 * h, axpy(y, h, {{a21, &k1}}));
        const Vec k3 = st.rhs(sigma + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const Vec k4 = st.rhs(sigma + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec k5 = st.rhs(sigma + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec k6 =
            st.rhs(sigma + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const Vec yn = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        bool ok = finite_state(yn);
        Vec k7;
        double err = 1e10;
        if (ok) {
            k7 = st.rhs(sigma + h, yn);
            ok = finite_state(k7);
        }
        if (ok) {
            const Vec e = axpy(Vec(y.size(), 0.0), h, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
            err = st.error_norm(y, yn, e);
        }
        if (ok && err <= 1.0) {
            if (opt.admissible && !opt.admissible(yn)) {
                throw DomainEscape("state left the admissible region near t = " +
                                   std::to_string((path.t0 + (sigma + h) * dt).real()) + "," +
                                   std::to_string((path.t0 + (sigma + h) * dt).imag()));
            }
            sigma = last ? 1.0 : sigma + h;
            y = yn;
            k1 = k7;
            ++tr.stats.accepted;
            tr.stats.min_step = std::min(tr.stats.min_step, h);
            tr.samples.push_back({last ? path.t1 : path.t0 + sigma * dt, y, err});
            const double e = std::max(err, 1e-10);
            double fac = safety * std::pow(e, -alpha) * std::pow(err_prev, beta);
            fac = std::clamp(fac, 0.2, 5.0);
            err_prev = e;
            h = std::min(hmax, h * fac);
        } else {
            ++tr.stats.rejected;
            const double fac = ok ? std::max(0.2, safety * std::pow(err, -0.2)) : 0.25;
            h *= fac;
        }
    }
    tr.stats.evaluations = st.evals;
    return tr;
}

Trajectory integrate(const SystemState &init, const PathSegment &path, double rtol, double atol)
{
    IntegrateOptions o;
    o.rtol = rtol;
    o.atol = atol;
    return integrate(init, path, o);
}

Trajectory integrate_uniform(const SystemState &init, const PathSegment &path, int n, const IntegrateOptions &opt)
{
    if (n < 2) {
        throw ResamplingError("uniform grid needs at least two intervals");
    }
    Trajectory out;
    out.system = init.system;
    out.samples.push_back({path.t0, init.v, 0.0});
    IntegrateOptions sub = opt;
    sub.min_interior = 1;
    SystemState cur = init;
    const cplx dt = (path.t1 - path.t0) / static_cast<double>(n);
    for (int j = 0; j < n; ++j) {
        PathSegment seg{path.t0 + static_cast<double>(j) * dt, path.t0 + static_cast<double>(j + 1) * dt,
                        path.upper_half_plane};
        if (j + 1 == n) {
            seg.t1 = path.t1;
        }
        const Trajectory piece = integrate(cur, seg, sub);
        double err = 0.0;
        for (const auto &s : piece.samples) {
            err = std::max(err, s.error);
        }
        out.samples.push_back({seg.t1, piece.back().state, err});
        out.stats.accepted += piece.stats.accepted;
        out.stats.rejected += piece.stats.rejected;
        out.stats.evaluations += piece.stats.evaluations;
        out.stats.min_step = std::min(out.stats.min_step, piece.stats.min_step / n);
        cur = piece.state(piece.samples.size() - 1);
    }
    return out;
}

} // namespace modflow
