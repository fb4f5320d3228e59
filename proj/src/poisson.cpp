#include "modflow/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/SVD>

#include "modflow/elliptic.hpp"

namespace modflow
{

namespace
{

using J4 = Jet<4>;

void require(bool ok, const char *what)
{
    if (!ok) {
        throw SingularState(what);
    }
}

void require_canonical(const SystemState &s)
{
    if (s.tag() != SystemTag::Canonical19) {
        throw UnsupportedSystem("brackets are defined on canonical19 states");
    }
}

double max_abs(const Mat4 &m) { return m.cwiseAbs().maxCoeff(); }
double max_abs(const Vec4 &v) { return v.cwiseAbs().maxCoeff(); }

Vec4 to_vec(const std::array<cplx, 4> &a) { return Vec4(a[0], a[1], a[2], a[3]); }
Vec4 to_vec(const std::vector<cplx> &a) { return Vec4(a[0], a[1], a[2], a[3]); }

std::string lambda_tag(cplx l)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "[lambda=%g,%g]", l.real(), l.imag());
    return buf;
}

// det m = pf(m)^2 for antisymmetric m; three products instead of a full
// expansion.
cplx pfaffian(const Mat4 &m) { return m(0, 1) * m(2, 3) - m(0, 2) * m(1, 3) + m(0, 3) * m(1, 2); }

Mat4 omega_matrix(const SystemState &s)
{
    const cplx x = s.v[0], y = s.v[1], z = s.v[2];
    const cplx d = y * y - z * z;
    require(std::abs(x) > 1e-300 && std::abs(d) > 1e-300, "omega needs x != 0 and y^2 != z^2");
    const cplx f = x * x * x / d;  // x / (2 H)
    const std::vector<cplx> V = vector_field(s);
    Mat4 m = Mat4::Zero();
    for (int j = 1; j < 4; ++j) {
        m(0, j) = f * V[j];
        m(j, 0) = -f * V[j];
    }
    return m;
}

Mat4 omega_tilde_matrix(const SystemState &s, BranchTracker *t)
{
    const cplx x = s.v[0], y = s.v[1], z = s.v[2];
    require(std::abs(y) > 1e-300, "y = 0");
    const cplx m = z / y;
    const cplx mp = t ? t->root("mprime", 1.0 - m * m) : right_sqrt(1.0 - m * m);
    const LegendreQuad q = legendre_quad(Modulus(m, mp));
    const cplx r = q.E / q.K;
    const cplx y2 = y * y, z2 = z * z;
    const cplx M1 = 3.0 * y2 * (r - 1.0) * (r - 1.0) - z2;
    const cplx M3 = y2 * (3.0 * r * r - 1.0) + z2;
    const cplx M2 = 3.0 * y2 * y2 * (r - 1.0) * (r - 1.0) + y2 * z2 * (6.0 * r - 5.0) + 2.0 * z2 * z2;
    Mat4 o;
    o << 0.0, x * z2 / y, x * z, x * M1,                 //
        -x * z2 / y, 0.0, z * (y2 - z2) / y, M2 / y,     //
        -x * z, z * (z2 - y2) / y, 0.0, z * M3,          //
        -x * M1, -M2 / y, -z * M3, 0.0;
    return 2.0 / pi * q.K * q.K * o;
}

// Mixed-variable Lagrangian pieces as jets in (A, B, k, I).
struct MixedJets {
    std::array<J4, 4> rho;
    J4 H, T, N;
    J4 J1, J2;
};

MixedJets mixed_jets(const std::array<cplx, 4> &X, cplx kprime)
{
    std::array<J4, 4> v;
    for (int i = 0; i < 4; ++i) {
        v[i] = J4::variable(X[i], i);
    }
    const J4 &A = v[0], &B = v[1], &k = v[2], &Iv = v[3];
    const auto q = legendre_quad_lift<J4>(k, kprime);
    const J4 &K = q[0], &Kp = q[1], &E = q[2], &Ep = q[3];
    const J4 k2 = k * k;
    MixedJets m;
    m.J1 = 4.0 * K * B - (E + (k2 - 1.0) * K) * A * Iv;
    m.J2 = 4.0 * Kp * B + (Ep - k2 * Kp) * A * Iv;
    const J4 A2 = A * A;
    m.rho[0] = 4.0 * m.J1 * K / A2;
    m.rho[1] = J4(0.0);
    m.rho[2] = -2.0 * (k * Iv * K * K + (m.J1 * m.J1 - 16.0 * B * B * K * K) / (k * (k2 - 1.0) * Iv * A2));
    m.rho[3] = m.J2 + 2.0 * K / (A * Iv) * (m.J1 - 4.0 * B * K);
    m.H = m.J1 * m.J1;
    m.T = B * K * K / A;
    m.N = -2.0 * K / (A * m.J1);
    return m;
}

// Hessian of T = B K^2 / A; K'' from Legendre's equation
// k (1 - k^2) K'' + (1 - 3 k^2) K' - k K = 0.
Mat4 hessian_T(const std::array<cplx, 4> &X, cplx kprime)
{
    const cplx A = X[0], B = X[1], k = X[2];
    const Modulus mod(k, kprime);
    const LegendreQuad q = legendre_quad(mod);
    const cplx K = q.K, dK = legendre_quad_deriv(mod, q).dK;
    const cplx d2K = ((3.0 * k * k - 1.0) * dK + k * K) / (k * (1.0 - k * k));
    const cplx G = K * K, dG = 2.0 * K * dK, d2G = 2.0 * (dK * dK + K * d2K);
    Mat4 h = Mat4::Zero();
    h(0, 0) = 2.0 * B * G / (A * A * A);
    h(0, 1) = h(1, 0) = -G / (A * A);
    h(0, 2) = h(2, 0) = -B * dG / (A * A);
    h(1, 2) = h(2, 1) = dG / A;
    h(2, 2) = B * d2G / A;
    return h;
}

struct ElNodes {
    std::vector<Vec4> r;  // per interior node
    double scale = 0.0;
};

ElNodes el_nodes(const std::vector<std::array<cplx, 4>> &X, cplx step, bool with_td,
                 const std::vector<cplx> &kprimes)
{
    const std::size_t n = X.size();
    if (n < 3) {
        throw ResamplingError("at least three nodes are needed");
    }
    std::vector<MixedJets> jets;
    jets.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        jets.push_back(mixed_jets(X[j], kprimes[j]));
    }
    // momentum p_n = rho_n (+ 8 dT/dX_n when the total derivative is dropped)
    auto momentum = [&](std::size_t j) {
        Vec4 p;
        for (int i = 0; i < 4; ++i) {
            p(i) = jets[j].rho[i].v + (with_td ? cplx(0.0) : 8.0 * jets[j].T.d[i]);
        }
        return p;
    };
    ElNodes out;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const Vec4 pdot = (momentum(j + 1) - momentum(j - 1)) / (2.0 * step);
        Vec4 xdot;
        for (int i = 0; i < 4; ++i) {
            xdot(i) = (X[j + 1][i] - X[j - 1][i]) / (2.0 * step);
        }
        Mat4 D;  // D(n, k) = d rho_n / d X_k
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                D(a, b) = jets[j].rho[a].d[b];
            }
        }
        if (!with_td) {
            D += 8.0 * hessian_T(X[j], kprimes[j]);
        }
        Vec4 dH;
        for (int i = 0; i < 4; ++i) {
            dH(i) = jets[j].H.d[i];
        }
        const Vec4 dLdX = D.transpose() * xdot - dH;
        out.r.push_back(pdot - dLdX);
        out.scale = std::max({out.scale, max_abs(pdot), max_abs(Vec4(D.transpose() * xdot)), max_abs(dH)});
    }
    return out;
}

double el_max(const ElNodes &e)
{
    double m = 0.0;
    for (const auto &r : e.r) {
        m = std::max(m, max_abs(r));
    }
    return m / std::max(e.scale, 1e-300);
}

struct MixedPath {
    std::vector<std::array<cplx, 4>> X;
    std::vector<cplx> kprime;
    cplx step;
};

MixedPath mixed_path(const SystemState &s, cplx t0, cplx t1, int n)
{
    IntegrateOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-13;
    const Trajectory tr = integrate_uniform(s, {t0, t1, false}, n, opt);
    MixedPath mp;
    mp.step = (t1 - t0) / static_cast<double>(n);
    BranchTracker tracker;
    for (std::size_t j = 0; j < tr.samples.size(); ++j) {
        const SystemState m = transform_state(tr.state(j), SystemTag::Intermediate25);
        mp.X.push_back({m.v[0], m.v[1], m.v[2], m.v[3]});
        mp.kprime.push_back(tracker.root("kprime", 1.0 - m.v[2] * m.v[2]));
    }
    return mp;
}

} // namespace

cplx hamiltonian(const SystemState &s)
{
    require_canonical(s);
    require(std::abs(s.v[0]) > 1e-300, "H needs x != 0");
    return (s.v[1] * s.v[1] - s.v[2] * s.v[2]) / (2.0 * s.v[0] * s.v[0]);
}

Vec4 hamiltonian_gradient(const SystemState &s)
{
    require_canonical(s);
    const cplx x = s.v[0], y = s.v[1], z = s.v[2];
    require(std::abs(x) > 1e-300, "H needs x != 0");
    return Vec4(-(y * y - z * z) / (x * x * x), y / (x * x), -z / (x * x), 0.0);
}

BracketMatrix bracket(const SystemState &s, BracketKind kind, cplx lambda, BranchTracker *tracker)
{
    require_canonical(s);
    BracketMatrix b;
    b.kind = kind;
    b.lambda = lambda;
    switch (kind) {
    case BracketKind::omega:
        b.m = omega_matrix(s);
        break;
    case BracketKind::omega_tilde:
        b.m = omega_tilde_matrix(s, tracker);
        break;
    case BracketKind::pencil:
        b.m = omega_matrix(s);
        if (lambda != cplx(0.0)) {
            b.m += lambda * omega_tilde_matrix(s, tracker);
        }
        break;
    default:
        throw ParameterError("this bracket kind is built by its own operation");
    }
    return b;
}

Vec4 Observable::gradient(const SystemState &s) const
{
    if (grad) {
        return grad(s);
    }
    Vec4 g;
    const double h = 1e-6;
    for (int j = 0; j < 4; ++j) {
        SystemState p = s, m = s;
        p.v[j] += h;
        m.v[j] -= h;
        g(j) = (value(p) - value(m)) / (2.0 * h);
    }
    return g;
}

Observable observable_hamiltonian() { return {"H", hamiltonian, hamiltonian_gradient}; }

Observable observable_J1()
{
    return {"J1", [](const SystemState &s) { return canonical_integrals(s).J1; },
            [](const SystemState &s) { return to_vec(canonical_integrals(s).dJ1); }};
}

Observable observable_J2()
{
    return {"J2", [](const SystemState &s) { return canonical_integrals(s).J2; },
            [](const SystemState &s) { return to_vec(canonical_integrals(s).dJ2); }};
}

Observable observable_N()
{
    return {"N", [](const SystemState &s) { return normalizer_N(s).N; },
            [](const SystemState &s) { return to_vec(normalizer_N(s).grad); }};
}

Observable observable_inverse_J1(cplx lambda)
{
    return {"inv_lambda_J1", [lambda](const SystemState &s) { return 1.0 / (lambda * canonical_integrals(s).J1); },
            [lambda](const SystemState &s) {
                const CanonicalIntegrals c = canonical_integrals(s);
                return Vec4(-to_vec(c.dJ1) / (lambda * c.J1 * c.J1));
            }};
}

Observable observable_coordinate(int j)
{
    return {"X" + std::to_string(j), [j](const SystemState &s) { return s.v.at(static_cast<std::size_t>(j)); },
            [j](const SystemState &) {
                Vec4 e = Vec4::Zero();
                e(j) = 1.0;
                return e;
            }};
}

cplx poisson_bracket(const Observable &f, const Observable &g, const BracketMatrix &b, const SystemState &s)
{
    const Vec4 df = f.gradient(s), dg = g.gradient(s);
    return (df.transpose() * b.m * dg)(0, 0);
}

Report casimir_and_det_check(const SystemState &s, cplx lambda, const PoissonThresholds &th)
{
    Report rep;
    const std::string tag = lambda_tag(lambda);
    const std::array<const char *, 11> names{
        "hamiltonian_field", "casimir_omega_J1", "casimir_omega_J2", "casimir_omega_tilde_H", "casimir_omega_tilde_N",
        "det_omega",         "det_pencil",       "commute_H_J1",     "commute_H_J2",          "inverse_J1_bracket",
        "pencil_at_zero"};
    try {
        const Mat4 w = omega_matrix(s), wt = omega_tilde_matrix(s, nullptr);
        const Mat4 P = w + lambda * wt;
        const CanonicalIntegrals ci = canonical_integrals(s);
        const Normalizer N = normalizer_N(s);
        const Vec4 gH = hamiltonian_gradient(s), g1 = to_vec(ci.dJ1), g2 = to_vec(ci.dJ2), gN = to_vec(N.grad);
        const Vec4 V = to_vec(vector_field(s));
        auto cas = [](const Mat4 &m, const Vec4 &g) { return max_abs(Vec4(m * g)) / (max_abs(m) * max_abs(g)); };
        auto pb = [](const Vec4 &a, const Mat4 &m, const Vec4 &b) { return (a.transpose() * m * b)(0, 0); };
        rep.push_back(make_row(names[0], max_abs(Vec4(w * gH - V)) / max_abs(V), th.field));
        rep.push_back(make_row(names[1], cas(w, g1), th.casimir));
        rep.push_back(make_row(names[2], cas(w, g2), th.casimir));
        rep.push_back(make_row(names[3], cas(wt, gH), th.casimir));
        rep.push_back(make_row(names[4], cas(wt, gN), th.casimir));
        rep.push_back(make_row(names[5], std::norm(pfaffian(w)) / std::pow(max_abs(w), 4), th.det));
        const cplx x = s.v[0], y = s.v[1], z = s.v[2];
        const cplx model = 4.0 / (pi * pi) * lambda * lambda * std::pow(ci.J1, 4) * std::pow(x, 6) * y * y * z * z;
        rep.push_back(make_row(names[6] + tag, rel_residual(pfaffian(P) * pfaffian(P), model), th.det));
        const double sP = max_abs(P);
        rep.push_back(make_row(names[7] + tag, std::abs(pb(gH, P, g1)) / (max_abs(gH) * sP * max_abs(g1)),
                               th.commutation));
        rep.push_back(make_row(names[8] + tag, std::abs(pb(gH, P, g2)) / (max_abs(gH) * sP * max_abs(g2)),
                               th.commutation));
        const Vec4 gI1 = -g1 / (lambda * ci.J1 * ci.J1);
        rep.push_back(make_row(names[9] + tag, std::abs(pb(g2, P, gI1) - 1.0), th.inverse));
        const Mat4 p0 = bracket(s, BracketKind::pencil, 0.0).m;
        rep.push_back(make_row(names[10], max_abs(Mat4(p0 - w)), 1e-300 + 1e-15));
    } catch (const Error &e) {
        rep.clear();
        for (std::size_t i = 0; i < names.size(); ++i) {
            const bool tagged = i >= 6 && i <= 9;
            rep.push_back(error_row(std::string(names[i]) + (tagged ? tag : ""), e, th.casimir));
        }
    }
    return rep;
}

double jacobi_identity_residual(const std::function<Mat4(const std::vector<cplx> &)> &b_field,
                                const std::vector<cplx> &x, double h)
{
    const int n = 4;
    const Mat4 b = b_field(x);
    std::array<Mat4, 4> D;
    auto central = [&](int l, double step) {
        std::vector<cplx> p = x, m = x;
        p[l] += step;
        m[l] -= step;
        return Mat4((b_field(p) - b_field(m)) / (2.0 * step));
    };
    for (int l = 0; l < n; ++l) {
        D[l] = (4.0 * central(l, h / 2.0) - central(l, h)) / 3.0;
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                cplx s = 0.0;
                for (int l = 0; l < n; ++l) {
                    s += b(i, l) * D[l](j, k) + b(j, l) * D[l](k, i) + b(k, l) * D[l](i, j);
                }
                worst = std::max(worst, std::abs(s));
            }
        }
    }
    return worst / std::max(1.0, max_abs(b) * max_abs(b));
}

Report jacobi_identity_report(const SystemState &s, const std::vector<cplx> &lambdas, double threshold)
{
    Report rep;
    BranchTracker base;
    try {
        bracket(s, BracketKind::omega_tilde, 0.0, &base);
    } catch (const Error &) {
    }
    auto field_of = [&](BracketKind kind, cplx lambda) {
        return [=](const std::vector<cplx> &x) {
            BranchTracker t = base;
            return bracket(SystemState(SystemTag::Canonical19, x), kind, lambda, &t).m;
        };
    };
    rep.push_back(guarded_row("jacobi_identity_omega", threshold,
                              [&] { return jacobi_identity_residual(field_of(BracketKind::omega, 0.0), s.v); }));
    rep.push_back(guarded_row("jacobi_identity_omega_tilde", threshold, [&] {
        return jacobi_identity_residual(field_of(BracketKind::omega_tilde, 0.0), s.v);
    }));
    for (cplx l : lambdas) {
        rep.push_back(guarded_row("jacobi_identity_pencil" + lambda_tag(l), threshold, [&] {
            return jacobi_identity_residual(field_of(BracketKind::pencil, l), s.v);
        }));
    }
    return rep;
}

Mat4 nambu_matrix(const Vec4 &a, const Vec4 &b)
{
    Mat4 m = Mat4::Zero();
    std::array<int, 4> p{0, 1, 2, 3};
    do {
        int sign = 1;
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                if (p[i] > p[j]) {
                    sign = -sign;
                }
            }
        }
        m(p[0], p[1]) += static_cast<double>(sign) * a(p[2]) * b(p[3]);
    } while (std::next_permutation(p.begin(), p.end()));
    return m;
}

Report nambu_reduce_check(const SystemState &s, cplx lambda, const PoissonThresholds &th)
{
    Report rep;
    const std::array<const char *, 4> names{"nambu_reduction", "nambu_slot_swap", "nambu_volume", "nambu_four_bracket"};
    try {
        const Mat4 w = omega_matrix(s);
        const CanonicalIntegrals ci = canonical_integrals(s);
        const Vec4 g1 = to_vec(ci.dJ1), g2 = to_vec(ci.dJ2);
        const cplx x = s.v[0], y = s.v[1], z = s.v[2];
        const cplx pref = 2.0 / pi * x * x * x * y * z;
        const Mat4 red = pref * nambu_matrix(g1, g2);
        rep.push_back(make_row(names[0], max_abs(Mat4(red - w)) / max_abs(w), th.nambu));
        const Mat4 swapped = nambu_matrix(g2, g1);
        rep.push_back(make_row(names[1], max_abs(Mat4(swapped + nambu_matrix(g1, g2))), 1e-300 + 1e-15));
        // Xi^{-1} = sqrt(det Omega) = (2/pi) lambda J1^2 x^3 y z
        const Mat4 P = w + lambda * omega_tilde_matrix(s, nullptr);
        const cplx root = pref * lambda * ci.J1 * ci.J1;
        rep.push_back(make_row(names[2], rel_residual(pfaffian(P) * pfaffian(P), root * root), th.nambu));
        const Vec4 gI1 = -g1 / (lambda * ci.J1 * ci.J1);
        const Mat4 four = root * nambu_matrix(g2, gI1);
        rep.push_back(make_row(names[3], max_abs(Mat4(four - w)) / max_abs(w), th.nambu));
    } catch (const Error &e) {
        rep.clear();
        for (const char *n : names) {
            rep.push_back(error_row(n, e, th.nambu));
        }
    }
    return rep;
}

ObstructionResult obstruction_from_jacobians(const std::vector<MatX> &jacobians, double tol)
{
    if (jacobians.empty()) {
        throw ParameterError("no samples");
    }
    const int n = static_cast<int>(jacobians.front().rows());
    const int unknowns = n * (n - 1) / 2;
    std::vector<MatX> basis;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            MatX E = MatX::Zero(n, n);
            E(i, j) = 1.0;
            E(j, i) = -1.0;
            basis.push_back(E);
        }
    }
    MatX A(static_cast<Eigen::Index>(jacobians.size()) * unknowns, unknowns);
    for (std::size_t s = 0; s < jacobians.size(); ++s) {
        const MatX &W = jacobians[s];
        MatX block(unknowns, unknowns);
        for (int a = 0; a < unknowns; ++a) {
            const MatX C = basis[a] * W + W.transpose() * basis[a];
            int r = 0;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    block(r++, a) = C(i, j);
                }
            }
        }
        const double nrm = block.norm();
        if (nrm > 0.0) {
            block /= nrm;
        }
        A.block(static_cast<Eigen::Index>(s) * unknowns, 0, unknowns, unknowns) = block;
    }
    Eigen::JacobiSVD<MatX> svd(A);
    const auto &sv = svd.singularValues();
    ObstructionResult r;
    r.samples = static_cast<int>(jacobians.size());
    const double top = sv(0);
    r.min_singular = top > 0.0 ? sv(sv.size() - 1) / top : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (top <= 0.0 || sv(i) / top < tol) {
            ++r.nullspace_dim;
        }
    }
    return r;
}

ObstructionResult constant_bracket_obstruction(SystemId sys, std::uint64_t seed, int samples)
{
    if (sys.tag != SystemTag::Symmetric8 && sys.tag != SystemTag::Jacobi9 && sys.tag != SystemTag::Canonical19) {
        throw UnsupportedSystem("the obstruction test covers symmetric8, jacobi9 and canonical19");
    }
    if (samples < 12) {
        throw ParameterError("at least 12 samples are required");
    }
    Rng rng(seed);
    std::vector<MatX> W;
    for (int i = 0; i < samples; ++i) {
        std::vector<cplx> v(4);
        for (auto &c : v) {
            c = rng.uniform_complex(-1.0, 1.0);
        }
        W.push_back(jacobian(SystemState(sys, v)));
    }
    return obstruction_from_jacobians(W);
}

ObstructionResult obstruction_positive_control(std::uint64_t seed, int samples)
{
    Rng rng(seed);
    Mat4 O = Mat4::Zero(), S = Mat4::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const cplx a = rng.uniform_complex(-1.0, 1.0), b = rng.uniform_complex(-1.0, 1.0);
            if (i != j) {
                O(i, j) = a;
                O(j, i) = -a;
            }
            S(i, j) = b;
            S(j, i) = b;
        }
    }
    const MatX J = O * S;
    return obstruction_from_jacobians(std::vector<MatX>(static_cast<std::size_t>(samples), J));
}

TransportResult bracket_transport_residual(const Trajectory &tr, cplx lambda)
{
    if (tr.system.tag != SystemTag::Canonical19) {
        throw UnsupportedSystem("bracket transport runs along canonical19");
    }
    const std::size_t n = tr.samples.size();
    if (n < 5) {
        throw ResamplingError("five-point differences need at least five samples");
    }
    const cplx step = tr.samples[1].t - tr.samples[0].t;
    for (std::size_t j = 1; j < n; ++j) {
        if (std::abs((tr.samples[j].t - tr.samples[j - 1].t) - step) > 1e-9 * std::abs(step)) {
            throw ResamplingError("trajectory is not uniformly sampled");
        }
    }
    BranchTracker t;
    std::vector<Mat4> O;
    for (std::size_t j = 0; j < n; ++j) {
        O.push_back(bracket(tr.state(j), BracketKind::pencil, lambda, &t).m);
    }
    TransportResult r;
    r.step = std::abs(step);
    for (std::size_t j = 2; j + 2 < n; ++j) {
        const Mat4 d = (-O[j + 2] + 8.0 * O[j + 1] - 8.0 * O[j - 1] + O[j - 2]) / (12.0 * step);
        const MatX W = jacobian(tr.state(j));
        const Mat4 Wm = W;
        const Mat4 a = Wm * O[j] + O[j] * Wm.transpose();
        const Mat4 b = -(O[j] * Wm) - Wm.transpose() * O[j];
        const double scale = std::max({max_abs(d), max_abs(a), 1e-300});
        r.statement = std::max(r.statement, max_abs(Mat4(d - a)) / scale);
        r.proof = std::max(r.proof, max_abs(Mat4(d - b)) / scale);
    }
    return r;
}

PushforwardBracket pushforward_bracket(const SystemState &s, cplx det_lambda)
{
    require_canonical(s);
    const MatX T = transform_jacobian(s, SystemTag::Jacobi9);
    const Mat4 Tm = T;
    const Mat4 w = omega_matrix(s);
    PushforwardBracket out;
    out.T = T;
    out.bracket.kind = BracketKind::pushforward;
    const Mat4 c = Tm * w * Tm.transpose();
    out.bracket.m = (c - c.transpose()) / 2.0;
    const SystemState img = transform_state(s, SystemTag::Jacobi9);
    const cplx x = s.v[0], y = s.v[1], z = s.v[2];
    const cplx IJ = 12.0 * I * (y * y - z * z) / (pi * x * x);
    const Vec4 gI(0.0, 0.0, img.v[2] / IJ, 16.0 / IJ);
    const Vec4 gH = pi / (24.0 * I) * gI;
    const Vec4 V = to_vec(vector_field(img));
    out.field_residual = max_abs(Vec4(out.bracket.m * gH - V)) / max_abs(V);
    const Mat4 P = w + det_lambda * omega_tilde_matrix(s, nullptr);
    const Mat4 Pc = Tm * P * Tm.transpose();
    const Mat4 Pt = (Pc - Pc.transpose()) / 2.0;
    const cplx dT = Tm.determinant();
    const cplx pf = pfaffian(P), pft = pfaffian(Pt);
    // Pf(T P T^T) = det(T) Pf(P), sign included, against the size of the
    // Pfaffian's terms (they cancel heavily when T is ill-conditioned)
    const double terms = std::abs(Pt(0, 1) * Pt(2, 3)) + std::abs(Pt(0, 2) * Pt(1, 3)) + std::abs(Pt(0, 3) * Pt(1, 2));
    out.det_residual = std::abs(pft - pf * dT) / std::max({terms, std::abs(pf * dT), 1e-300});
    return out;
}

double lagrangian_el_residual(const std::vector<std::array<cplx, 4>> &mixed, cplx step, bool with_total_derivative)
{
    BranchTracker t;
    std::vector<cplx> kp;
    for (const auto &X : mixed) {
        kp.push_back(t.root("kprime", 1.0 - X[2] * X[2]));
    }
    return el_max(el_nodes(mixed, step, with_total_derivative, kp));
}

LagrangianResult lagrangian_residual(const SystemState &s, cplx t0, cplx t1, int n)
{
    require_canonical(s);
    if (n < 8) {
        throw ResamplingError("grid too coarse");
    }
    const MixedPath coarse = mixed_path(s, t0, t1, n);
    const MixedPath fine = mixed_path(s, t0, t1, 2 * n);
    LagrangianResult r;
    const ElNodes ec = el_nodes(coarse.X, coarse.step, false, coarse.kprime);
    const ElNodes ef = el_nodes(fine.X, fine.step, false, fine.kprime);
    r.coarse = el_max(ec);
    r.fine = el_max(ef);
    r.ratio = r.coarse / std::max(r.fine, 1e-300);

    // Richardson-combined nodal residuals with and without the total
    // derivative: the O(h^2) discretization parts cancel and only the
    // difference between the two Lagrangians remains.
    const ElNodes tc = el_nodes(coarse.X, coarse.step, true, coarse.kprime);
    const ElNodes tf = el_nodes(fine.X, fine.step, true, fine.kprime);
    double shift = 0.0;
    for (std::size_t j = 1; j + 1 < coarse.X.size(); ++j) {
        const std::size_t jf = 2 * j;
        const Vec4 a = (4.0 * ef.r[jf - 1] - ec.r[j - 1]) / 3.0;
        const Vec4 b = (4.0 * tf.r[jf - 1] - tc.r[j - 1]) / 3.0;
        shift = std::max(shift, max_abs(Vec4(a - b)));
    }
    r.total_derivative_shift = shift / std::max(ef.scale, 1e-300);

    // Both displayed forms at an arbitrary velocity, and on-shell values.
    const std::array<cplx, 4> X = coarse.X[n / 2];
    const MixedJets m = mixed_jets(X, coarse.kprime[static_cast<std::size_t>(n / 2)]);
    const Vec4 vel(cplx(0.3, 0.1), cplx(-0.2, 0.7), cplx(0.5, -0.2), cplx(0.1, 0.3));
    auto dot = [](const std::array<cplx, 4> &g, const Vec4 &v) {
        cplx a = 0.0;
        for (int i = 0; i < 4; ++i) {
            a += g[i] * v(i);
        }
        return a;
    };
    auto line1 = [&](const Vec4 &v) {
        return m.H.v * (dot(m.N.d, v) - 1.0) + m.J2.v * v(3) - 8.0 * dot(m.T.d, v);
    };
    auto line2 = [&](const Vec4 &v) {
        cplx a = -m.H.v;
        for (int i = 0; i < 4; ++i) {
            a += m.rho[i].v * v(i);
        }
        return a;
    };
    r.lines_agree = rel_residual(line1(vel), line2(vel));
    const Vec4 V = to_vec(vector_field(SystemState(SystemTag::Intermediate25, {X[0], X[1], X[2], X[3]})));
    const cplx onshell = line2(V);
    r.onshell_vs_total_derivative = rel_residual(onshell, -8.0 * dot(m.T.d, V));
    r.onshell_vs_minus_J1sq = rel_residual(onshell, -m.H.v);
    return r;
}

Report scaling_symmetry_check(const SystemState &s, double threshold)
{
    Report rep;
    const std::array<const char *, 5> names{"scaling_jacobi_I2", "scaling_annihilates_yzu", "scaling_commutes_with_field",
                                            "scaling_pushforward_jacobi", "scaling_integral_weight"};
    try {
        require_canonical(s);
        const cplx x = s.v[0], y = s.v[1], z = s.v[2];
        const Vec4 G(2.0 * x, 0.0, 0.0, 0.0);
        // (i) on (A, B, a, b): G = (A, -B, -2a, -4b) applied to a^2 + 32 b
        const SystemState J = transform_state(s, SystemTag::Jacobi9);
        const cplx a = J.v[2], b = J.v[3];
        const Vec4 GJ(J.v[0], -J.v[1], -2.0 * a, -4.0 * b);
        const cplx I2 = a * a + 32.0 * b;
        const cplx GI2 = 2.0 * a * GJ(2) + 32.0 * GJ(3);
        rep.push_back(make_row(names[0], rel_residual(GI2, -4.0 * I2), threshold));
        rep.push_back(make_row(names[1], max_abs(Vec4(0.0, G(1), G(2), G(3))), 1e-300 + 1e-15));
        // [G, V] = W G - DG V
        const MatX W = jacobian(s);
        const Vec4 V = to_vec(vector_field(s));
        Mat4 DG = Mat4::Zero();
        DG(0, 0) = 2.0;
        const Vec4 comm = Mat4(W) * G - DG * V;
        rep.push_back(make_row(names[2], max_abs(comm) / std::max(max_abs(V), 1e-300), threshold));
        // 2 x d/dx pushes forward to 2 (A, -B, -2a, -4b)
        const Mat4 T = transform_jacobian(s, SystemTag::Jacobi9);
        const Vec4 pushed = T * G;
        rep.push_back(make_row(names[3], max_abs(Vec4(pushed - 2.0 * GJ)) / max_abs(GJ), threshold));
        // G (y^2 - z^2) / x^2 = -4 (y^2 - z^2) / x^2
        const cplx P = (y * y - z * z) / (x * x);
        const cplx GP = G(0) * (-2.0 * P / x);
        rep.push_back(make_row(names[4], rel_residual(GP, -4.0 * P), threshold));
    } catch (const Error &e) {
        rep.clear();
        for (const char *n : names) {
            rep.push_back(error_row(n, e, threshold));
        }
    }
    return rep;
}

} // namespace modflow
