#include "modflow/flows.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Eigenvalues>

namespace modflow
{

namespace
{

using J4 = Jet<4>;

[[noreturn]] void unsupported(SystemTag from, SystemTag to)
{
    throw UnsupportedSystem("no point transformation from " + std::string(system_name(from)) + " to " +
                            std::string(system_name(to)));
}

template <typename T>
void require_nonzero(const T &v, const char *what)
{
    if (std::abs(value_of(v)) < 1e-300) {
        throw SingularTransform(what);
    }
}

template <typename T>
std::vector<T> canonical_to_dh(const std::vector<T> &v)
{
    const T &y = v[1], &z = v[2], &u = v[3];
    const T y2 = y * y, z2 = z * z;
    return {u + y2 + z2, u + y2 - 2.0 * z2, u - 2.0 * y2 + z2};
}

template <typename T>
std::vector<T> dh_to_weierstrass(const std::vector<T> &v)
{
    const T &X = v[0], &Y = v[1], &Z = v[2];
    const double p = pi;
    const T eta = p * (X + Y + Z) / (6.0 * I);
    const T g2 = -p * p * (X * X + Y * Y + Z * Z - X * Y - X * Z - Y * Z) / 3.0;
    const T g3 = p * p * p * (2.0 * X - Y - Z) * (2.0 * Y - X - Z) * (2.0 * Z - X - Y) / (-54.0 * I);
    return {g2, g3, eta};
}

// sqrt((y^2 - z^2) / (pi x^2)) with the requested sign.
template <typename T>
T ic_of_canonical(const std::vector<T> &v, const TransformOptions &o)
{
    const T &x = v[0], &y = v[1], &z = v[2];
    require_nonzero(x, "x = 0: the integral (y^2 - z^2) / x^2 is undefined");
    require_nonzero(y, "y = 0");
    const T d = y * y - z * z;
    require_nonzero(d, "y^2 = z^2: degenerate modulus");
    using std::sqrt;
    return sign_of(o.ic) * sqrt(d / (pi * x * x));
}

template <typename T>
std::vector<T> canonical_to_intermediate(const std::vector<T> &v, const TransformOptions &o)
{
    const T &x = v[0], &y = v[1], &z = v[2], &u = v[3];
    const T ic = ic_of_canonical(v, o);
    const T A = (1.0 - I) / (2.0 * ic) * y;
    const T B = (1.0 + I) / 2.0 * ic / y * (u + y * y - 2.0 * z * z);
    const T k = std::sqrt(pi) * ic * x / y;
    return {A, B, k, 12.0 * I * ic * ic};
}

template <typename T>
std::vector<T> canonical_to_jacobi(const std::vector<T> &v, const TransformOptions &o)
{
    const T &x = v[0], &y = v[1], &z = v[2], &u = v[3];
    const T ic = ic_of_canonical(v, o);
    const T y2 = y * y, z2 = z * z, x2 = x * x, d = y2 - z2;
    return {(1.0 - I) / (2.0 * ic) * y, (1.0 + I) / 2.0 * ic / y * (u + y2 - 2.0 * z2),
            12.0 / (pi * I) * d / x2 * (y2 - 2.0 * z2) / y2, -18.0 / (pi * pi) * z2 / (x2 * x2 * y2 * y2) * d * d * d};
}

template <typename T>
std::vector<T> intermediate_to_canonical(const std::vector<T> &v, const TransformOptions &o)
{
    const T &A = v[0], &B = v[1], &k = v[2], &Iv = v[3];
    require_nonzero(Iv, "I = 0");
    using std::sqrt;
    const T ic = sign_of(o.ic) * sqrt(Iv / (12.0 * I));
    const T ic2 = ic * ic, k2 = k * k;
    return {(1.0 + I) / std::sqrt(pi) * k * A, (1.0 + I) * ic * A, sign_of(o.z) * sqrt(2.0 * I * ic2 * (1.0 - k2)) * A,
            2.0 * A * (B - I * ic2 * (2.0 * k2 - 1.0) * A)};
}

template <typename T>
std::vector<T> jacobi_to_intermediate(const std::vector<T> &v, const TransformOptions &o)
{
    const T &A = v[0], &B = v[1], &a = v[2], &b = v[3];
    using std::sqrt;
    const T Iv = sign_of(o.jacobi_i) * sqrt(a * a + 32.0 * b);
    require_nonzero(Iv, "a^2 + 32 b = 0");
    const T k = sign_of(o.jacobi_k) * sqrt(0.5 - a / (2.0 * Iv));
    return {A, B, k, Iv};
}

template <typename T>
std::vector<T> intermediate_to_jacobi(const std::vector<T> &v)
{
    const T &A = v[0], &B = v[1], &k = v[2], &Iv = v[3];
    const T k2 = k * k;
    return {A, B, Iv - 2.0 * Iv * k2, Iv * Iv * k2 * (1.0 - k2) / 8.0};
}

template <typename T>
std::vector<T> dh_to_canonical(const std::vector<T> &v, const TransformOptions &o)
{
    if (!o.x) {
        throw ParameterError("x must be supplied when lifting Darboux-Halphen variables");
    }
    const T &X = v[0], &Y = v[1], &Z = v[2];
    using std::sqrt;
    return {T(*o.x), sign_of(o.y) * sqrt((X - Z) / 3.0), sign_of(o.z) * sqrt((X - Y) / 3.0), (X + Y + Z) / 3.0};
}

template <typename T>
std::vector<T> dh_to_ramamani(const std::vector<T> &v, const TransformOptions &o)
{
    const T &X = v[0], &Y = v[1], &Z = v[2];
    const cplx pii = pi * I;
    return {2.0 * X / pii, (2.0 * X - Y - Z) / pii, o.ramamani_kappa * 4.0 * (X - Z) * (X - Y) / (pi * pi)};
}

template <typename T>
std::vector<T> ramamani_to_dh(const std::vector<T> &v, const TransformOptions &o)
{
    const T &P = v[0], &Pt = v[1], &Q = v[2];
    const cplx pii = pi * I;
    const T X = pii * P / 2.0;
    const T sum = pii * Pt;
    const T prod = pi * pi * Q / (4.0 * o.ramamani_kappa);
    using std::sqrt;
    const T disc = sqrt(sum * sum - 4.0 * prod);
    const T p = (sum + sign_of(o.ramamani_root) * disc) / 2.0;  // X - Y
    const T q = sum - p;                                          // X - Z
    return {X, X - p, X - q};
}

template <typename T>
std::vector<T> legendre_to_jacobi(const std::vector<T> &v, const T &k)
{
    const T &K = v[0], &E = v[2];
    const T k2 = k * k;
    return {2.0 * K / pi, 2.0 * E / pi - (1.0 - k2) * 2.0 * K / pi, 4.0 * (1.0 - 2.0 * k2), 2.0 * k2 * (1.0 - k2)};
}

template <typename T>
std::vector<T> symmetric_to_canonical(const std::vector<T> &v)
{
    const cplx c = std::sqrt(pi * I / 6.0);
    return {c * v[0] * v[0], c * v[1] * v[1], c * v[2] * v[2], 2.0 * I / pi * v[3]};
}

template <typename T>
std::vector<T> transform_generic(SystemTag from, SystemTag to, const std::vector<T> &v, const T &t,
                                 const TransformOptions &o)
{
    using S = SystemTag;
    if (from == to) {
        return v;
    }
    switch (from) {
    case S::Canonical19:
        switch (to) {
        case S::DarbouxHalphen2: return canonical_to_dh(v);
        case S::Jacobi9: return canonical_to_jacobi(v, o);
        case S::Intermediate25: return canonical_to_intermediate(v, o);
        case S::Ramamani44: return dh_to_ramamani(canonical_to_dh(v), o);
        case S::Weierstrass3: return dh_to_weierstrass(canonical_to_dh(v));
        default: break;
        }
        break;
    case S::DarbouxHalphen2:
        switch (to) {
        case S::Canonical19: return dh_to_canonical(v, o);
        case S::Weierstrass3: return dh_to_weierstrass(v);
        case S::Ramamani44: return dh_to_ramamani(v, o);
        default: break;
        }
        break;
    case S::Jacobi9:
        switch (to) {
        case S::Intermediate25: return jacobi_to_intermediate(v, o);
        case S::Canonical19: return intermediate_to_canonical(jacobi_to_intermediate(v, o), o);
        default: break;
        }
        break;
    case S::Intermediate25:
        switch (to) {
        case S::Canonical19: return intermediate_to_canonical(v, o);
        case S::Jacobi9: return intermediate_to_jacobi(v);
        default: break;
        }
        break;
    case S::Ramamani44:
        if (to == S::DarbouxHalphen2) {
            return ramamani_to_dh(v, o);
        }
        break;
    case S::LegendreClosure28:
        if (to == S::Jacobi9) {
            return legendre_to_jacobi(v, t);
        }
        break;
    case S::Symmetric8:
        if (to == S::Canonical19) {
            return symmetric_to_canonical(v);
        }
        break;
    default: break;
    }
    unsupported(from, to);
}

// Weierstrass -> Darboux-Halphen: X_j = (2i/pi)(eta + e_j) over the roots of
// 4e^3 - g2 e - g3.
std::vector<cplx> weierstrass_to_dh(const std::vector<cplx> &v, const TransformOptions &o)
{
    const cplx g2 = v[0], g3 = v[1], eta = v[2];
    Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
    // monic e^3 + 0 e^2 - (g2/4) e - g3/4
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(0, 2) = g3 / 4.0;
    companion(1, 2) = g2 / 4.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(companion);
    std::array<cplx, 3> roots{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
    for (auto &r : roots) {
        for (int it = 0; it < 3; ++it) {
            const cplx f = 4.0 * r * r * r - g2 * r - g3;
            const cplx df = 12.0 * r * r - g2;
            if (std::abs(df) > 1e-300) {
                r -= f / df;
            }
        }
    }
    std::array<cplx, 3> X{};
    for (int j = 0; j < 3; ++j) {
        X[j] = 2.0 * I / pi * (eta + roots[j]);
    }
    std::array<int, 3> perm{0, 1, 2};
    if (o.reference) {
        double best = std::numeric_limits<double>::infinity();
        std::array<int, 3> p{0, 1, 2}, chosen = p;
        do {
            double d = 0.0;
            for (int j = 0; j < 3; ++j) {
                d += std::abs(X[p[j]] - (*o.reference)[j]);
            }
            if (d < best) {
                best = d;
                chosen = p;
            }
        } while (std::next_permutation(p.begin(), p.end()));
        perm = chosen;
    } else {
        std::sort(perm.begin(), perm.end(), [&](int a, int b) {
            if (X[a].real() != X[b].real()) {
                return X[a].real() < X[b].real();
            }
            return X[a].imag() < X[b].imag();
        });
    }
    return {X[perm[0]], X[perm[1]], X[perm[2]]};
}

} // namespace

std::vector<cplx> vector_field(const SystemState &s, cplx t) { return field<cplx>(s.system, s.v, t); }

MatX jacobian(const SystemState &s, cplx t)
{
    const int n = s.system.dimension();
    std::vector<J4> x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = J4::variable(s.v[i], i);
    }
    const std::vector<J4> f = field<J4>(s.system, x, J4(t));
    MatX W(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            W(j, k) = f[j].d[k];
        }
    }
    return W;
}

std::vector<cplx> lie_derivatives(const SystemState &s, int component, int order)
{
    if (order < 1 || order > 4) {
        throw ParameterError("Lie derivative order must be in 1..4");
    }
    if (component < 0 || component >= s.system.dimension()) {
        throw ParameterError("component index out of range");
    }
    const auto x = taylor_flow<4>(s);
    std::vector<cplx> out;
    for (int n = 1; n <= order; ++n) {
        out.push_back(x[component].derivative_at_zero(n));
    }
    return out;
}

bool transform_supported(SystemTag from, SystemTag to) noexcept
{
    using S = SystemTag;
    static constexpr std::array<TransformPair, 15> pairs{{
        {S::Canonical19, S::DarbouxHalphen2},
        {S::DarbouxHalphen2, S::Canonical19},
        {S::Canonical19, S::Jacobi9},
        {S::Jacobi9, S::Canonical19},
        {S::Canonical19, S::Intermediate25},
        {S::Intermediate25, S::Canonical19},
        {S::Jacobi9, S::Intermediate25},
        {S::Intermediate25, S::Jacobi9},
        {S::Canonical19, S::Ramamani44},
        {S::DarbouxHalphen2, S::Ramamani44},
        {S::Ramamani44, S::DarbouxHalphen2},
        {S::DarbouxHalphen2, S::Weierstrass3},
        {S::Weierstrass3, S::DarbouxHalphen2},
        {S::LegendreClosure28, S::Jacobi9},
        {S::Canonical19, S::Weierstrass3},
    }};
    if (from == to || (from == S::Symmetric8 && to == S::Canonical19)) {
        return true;
    }
    return std::any_of(pairs.begin(), pairs.end(), [&](const TransformPair &p) { return p.from == from && p.to == to; });
}

SystemState transform_state(const SystemState &from, SystemId to, const TransformOptions &opt, cplx t)
{
    if (from.tag() == SystemTag::Weierstrass3 && to.tag == SystemTag::DarbouxHalphen2) {
        return {to, weierstrass_to_dh(from.v, opt)};
    }
    if (to.tag == SystemTag::HalphenBrioschi57 || from.tag() == SystemTag::HalphenBrioschi57) {
        if (from.tag() != to.tag) {
            unsupported(from.tag(), to.tag);
        }
    }
    std::vector<cplx> out = transform_generic<cplx>(from.tag(), to.tag, from.v, t, opt);
    for (const cplx &c : out) {
        if (!is_finite(c)) {
            throw SingularTransform("transformation produced a non-finite component");
        }
    }
    return {to, std::move(out)};
}

MatX transform_jacobian(const SystemState &from, SystemId to, const TransformOptions &opt, cplx t)
{
    const int n = from.system.dimension();
    if (from.tag() == SystemTag::Weierstrass3 && to.tag == SystemTag::DarbouxHalphen2) {
        const SystemState image = transform_state(from, to, opt, t);
        return transform_jacobian(image, SystemTag::Weierstrass3, opt, t).inverse();
    }
    std::vector<J4> x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = J4::variable(from.v[i], i);
    }
    const std::vector<J4> y = transform_generic<J4>(from.tag(), to.tag, x, J4(t), opt);
    MatX T(static_cast<int>(y.size()), n);
    for (int j = 0; j < static_cast<int>(y.size()); ++j) {
        for (int k = 0; k < n; ++k) {
            T(j, k) = y[j].d[k];
        }
    }
    return T;
}

cplx default_time_factor(const SystemState &from, SystemId to, const TransformOptions &opt, cplx t)
{
    if (from.tag() == SystemTag::LegendreClosure28 && to.tag == SystemTag::Jacobi9) {
        // dk/dh = (I/2) k (1 - k^2) A^2 with I = 4 for this embedding
        const SystemState img = transform_state(from, to, opt, t);
        return 1.0 / (2.0 * t * (1.0 - t * t) * img.v[0] * img.v[0]);
    }
    return 1.0;
}

PushforwardCheck pushforward_check(const SystemState &from, SystemId to, const TransformOptions &opt, cplx t,
                                   std::optional<cplx> factor)
{
    PushforwardCheck r;
    const std::vector<cplx> v = vector_field(from, t);
    const SystemState image = transform_state(from, to, opt, t);
    if (from.tag() == SystemTag::Weierstrass3 && to.tag == SystemTag::DarbouxHalphen2) {
        const MatX T = transform_jacobian(from, to, opt, t);
        const VecX rate = T * Eigen::Map<const VecX>(v.data(), static_cast<int>(v.size()));
        r.image_rate.assign(rate.data(), rate.data() + rate.size());
    } else {
        std::vector<Series<1>> xs(from.v.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xs[i].c[0] = from.v[i];
            xs[i].c[1] = v[i];
        }
        Series<1> ts(t);
        ts.c[1] = 1.0;
        const auto ys = transform_generic<Series<1>>(from.tag(), to.tag, xs, ts, opt);
        for (const auto &y : ys) {
            r.image_rate.push_back(y.c[1]);
        }
    }
    r.target_field = vector_field(image, 0.0);
    r.factor = factor ? *factor : default_time_factor(from, to, opt, t);
    double scale = 1e-300, err = 0.0;
    for (std::size_t i = 0; i < r.target_field.size(); ++i) {
        scale = std::max({scale, std::abs(r.image_rate[i]), std::abs(r.factor * r.target_field[i])});
        err = std::max(err, std::abs(r.image_rate[i] - r.factor * r.target_field[i]));
    }
    r.residual = err / scale;
    const MatX W = jacobian(image, 0.0);
    r.componentwise = 0.0;
    for (std::size_t i = 0; i < r.target_field.size(); ++i) {
        double terms = std::abs(r.image_rate[i]);
        double sum = 0.0;
        for (std::size_t j = 0; j < image.v.size(); ++j) {
            sum += std::abs(W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * image.v[j]);
        }
        terms = std::max({terms, std::abs(r.factor) * sum, 1e-300});
        r.componentwise = std::max(r.componentwise, std::abs(r.image_rate[i] - r.factor * r.target_field[i]) / terms);
    }
    return r;
}

cplx nearest_root(cplx root, cplx previous)
{
    return std::abs(root - previous) <= std::abs(root + previous) ? root : -root;
}

} // namespace modflow
