#include "modflow/conserved.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modflow/elliptic.hpp"
#include "modflow/flows.hpp"

namespace modflow
{

namespace
{

using J4 = Jet<4>;

cplx tracked_root(BranchTracker *t, const std::string &key, cplx square)
{
    return t ? t->root(key, square) : right_sqrt(square);
}

cplx tracked_log(BranchTracker *t, const std::string &key, cplx w)
{
    return t ? t->log(key, w) : std::log(w);
}

void require(bool ok, const char *what)
{
    if (!ok) {
        throw SingularState(what);
    }
}

bool tiny(cplx v) { return std::abs(v) < 1e-300; }

// J1, J2, N for Canonical19 with m = z/y.
template <typename T>
std::array<T, 3> canonical_generic(const std::vector<T> &s, cplx mprime)
{
    const T &y = s[1], &z = s[2], &u = s[3];
    const T m = z / y;
    const std::array<T, 4> q = legendre_quad_lift<T>(m, mprime);
    const T y2 = y * y, z2 = z * z;
    const T J1 = (u - 2.0 * y2 + z2) / y * q[0] + 3.0 * y * q[2];
    const T J2 = (u + y2 + z2) / y * q[1] - 3.0 * y * q[3];
    return {J1, J2, -q[0] / (y * J1)};
}

cplx canonical_mprime(const SystemState &s, BranchTracker *t)
{
    require(!tiny(s.v[1]), "y = 0");
    const cplx m = s.v[2] / s.v[1];
    return tracked_root(t, "mprime", 1.0 - m * m);
}

std::array<cplx, 2> dh_integrals(cplx X, cplx Y, cplx Z, BranchTracker *t)
{
    require(!tiny(X - Z), "X = Z");
    const cplx m = tracked_root(t, "m", (X - Y) / (X - Z));
    const cplx r = tracked_root(t, "r", X - Z);
    const cplx mp = tracked_root(t, "mprime", 1.0 - m * m);
    const LegendreQuad q = legendre_quad(Modulus(m, mp));
    return {Z / r * q.K + r * q.E, X / r * q.Kprime - r * q.Eprime};
}

// Series helpers for the ODE residual rows.
template <int N>
cplx c_expression(const Series<N> &C, double *scale = nullptr)
{
    const cplx c0 = C.c[0], c1 = C.c[1], c2 = 2.0 * C.c[2], c3 = 6.0 * C.c[3];
    const cplx l = 3.0 * c1 / c0 + c3 / c2;
    const cplx t1 = std::pow(c0, 4) * l * l, t2 = 16.0 * std::pow(c0, 3) * c2;
    if (scale) {
        *scale = std::max({std::abs(t1), std::abs(t2), 1e-300});
    }
    return t1 - t2;
}

// C'' negligible against C and C': the logarithmic term is undefined.
template <int N>
bool flat(const Series<N> &C)
{
    return std::abs(C.c[2]) <= 1e-12 * (std::abs(C.c[0]) + std::abs(C.c[1]));
}

template <int N>
Series<N> component_series(const std::vector<Series<N>> &flow, int j)
{
    return flow.at(static_cast<std::size_t>(j));
}

Series<3> theta_series(const ThetaQuad &q, int j)
{
    Series<3> s;
    double f = 1.0;
    for (int n = 0; n <= 3; ++n) {
        s.c[n] = q.at(n, j) / f;
        f *= n + 1;
    }
    return s;
}

} // namespace

cplx IntegralSet::value(std::string_view name) const
{
    for (const auto *list : {&algebraic, &transcendental, &derived}) {
        for (const auto &nv : *list) {
            if (nv.name == name) {
                return nv.value;
            }
        }
    }
    throw ParameterError("no integral named " + std::string(name));
}

cplx BranchTracker::root(const std::string &key, cplx square)
{
    cplx r = right_sqrt(square);
    if (auto p = previous(key)) {
        r = nearest_root(r, *p);
    }
    last_[key] = r;
    return r;
}

cplx BranchTracker::log(const std::string &key, cplx w)
{
    cplx l = std::log(w);
    if (auto p = previous(key)) {
        const double turns = std::round((p->imag() - l.imag()) / (2.0 * pi));
        l += cplx(0.0, 2.0 * pi * turns);
    }
    last_[key] = l;
    return l;
}

std::optional<cplx> BranchTracker::previous(const std::string &key) const
{
    const auto it = last_.find(key);
    if (it == last_.end()) {
        return std::nullopt;
    }
    return it->second;
}

IntegralSet algebraic_invariants(const SystemState &s)
{
    IntegralSet out;
    out.system = s.tag();
    const auto &v = s.v;
    switch (s.tag()) {
    case SystemTag::Jacobi9: {
        const cplx I2 = v[2] * v[2] + 32.0 * v[3];
        out.algebraic.push_back({"I2", I2});
        const cplx Iv = right_sqrt(I2);
        require(!tiny(Iv), "a^2 + 32 b = 0");
        out.algebraic.push_back({"I", Iv});
        out.derived.push_back({"k2", 0.5 - v[2] / (2.0 * Iv)});
        break;
    }
    case SystemTag::Canonical19:
        require(!tiny(v[0]), "x = 0: (y^2 - z^2) / x^2 undefined");
        out.algebraic.push_back({"piI2", (v[1] * v[1] - v[2] * v[2]) / (v[0] * v[0])});
        break;
    case SystemTag::Symmetric8: {
        const cplx a = std::pow(v[0], 4), b = std::pow(v[1], 4), c = std::pow(v[2], 4);
        require(!tiny(a * b * c), "a theta component vanishes");
        out.algebraic.push_back({"U", std::pow(b - a - c, 3) / (a * b * c)});
        break;
    }
    case SystemTag::Intermediate25:
        out.algebraic.push_back({"I", v[3]});
        break;
    case SystemTag::LegendreClosure28:
        out.algebraic.push_back({"level", legendre_level({v[0], v[1], v[2], v[3]})});
        break;
    default:
        break;
    }
    return out;
}

MixedIntegrals mixed_integrals(cplx A, cplx B, cplx k, cplx Iv, std::optional<cplx> kprime)
{
    const LegendreQuad q = legendre_quad(kprime ? Modulus(k, *kprime) : Modulus(k));
    const cplx k2 = k * k;
    return {4.0 * q.K * B - (q.E + (k2 - 1.0) * q.K) * A * Iv, 4.0 * q.Kprime * B + (q.Eprime - k2 * q.Kprime) * A * Iv,
            q.K, q.Kprime, q.E, q.Eprime};
}

CanonicalIntegrals canonical_integrals(const SystemState &s, BranchTracker *t)
{
    if (s.tag() != SystemTag::Canonical19) {
        throw UnsupportedSystem("canonical integrals need a canonical19 state");
    }
    const cplx mp = canonical_mprime(s, t);
    std::vector<J4> x(4);
    for (int i = 0; i < 4; ++i) {
        x[i] = J4::variable(s.v[i], i);
    }
    const auto r = canonical_generic<J4>(x, mp);
    const LegendreQuad q = legendre_quad(Modulus(s.v[2] / s.v[1], mp));
    CanonicalIntegrals ci;
    ci.J1 = r[0].v;
    ci.J2 = r[1].v;
    ci.K = q.K;
    ci.Kprime = q.Kprime;
    ci.E = q.E;
    ci.Eprime = q.Eprime;
    ci.mprime = mp;
    ci.dJ1 = r[0].d;
    ci.dJ2 = r[1].d;
    return ci;
}

Normalizer normalizer_N(const SystemState &s, BranchTracker *t)
{
    if (s.tag() != SystemTag::Canonical19) {
        throw UnsupportedSystem("the normalizer is defined for canonical19");
    }
    const cplx mp = canonical_mprime(s, t);
    std::vector<J4> x(4);
    for (int i = 0; i < 4; ++i) {
        x[i] = J4::variable(s.v[i], i);
    }
    const auto r = canonical_generic<J4>(x, mp);
    require(!tiny(r[0].v), "J1 = 0");
    return {r[2].v, r[2].d};
}

std::array<cplx, 2> hb_integrals(const SystemState &s, BranchTracker *t, bool printed_prefactor)
{
    if (s.tag() != SystemTag::HalphenBrioschi57) {
        throw UnsupportedSystem("hypergeometric integrals need a halphen_brioschi57 state");
    }
    const HBParams p = s.system.hb;
    const cplx a = p.a, b = p.b, c = p.c;
    if (std::abs(c.imag()) < 1e-12 && std::abs(c.real() - std::round(c.real())) < 1e-12) {
        throw ParameterError("c must not be an integer");
    }
    const cplx x = s.v[0], y = s.v[1], z = s.v[2];
    require(!tiny(z - y) && !tiny(y - x) && !tiny(z - x), "coincident components");
    const cplx sv = (z - x) / (z - y);
    const cplx A = (a + b - 1.0) * x - c * y - (a + b - c + 1.0) * z;
    const cplx B = 2.0 * a * b / c * (x - y) * (z - x) / (z - y);
    const cplx logC = (a + b - c) / 2.0 * tracked_log(t, "log_yx", y - x) -
                      (a + b) / 2.0 * tracked_log(t, "log_zy", z - y) +
                      (c - 1.0) / 2.0 * tracked_log(t, "log_zx", z - x);
    const cplx C = std::exp(logC);
    const cplx J1 = C * A * hyp2f1(a, b, c, sv) + C * B * hyp2f1(a + 1.0, b + 1.0, c + 1.0, sv);
    const cplx At = A + 2.0 * (z + y);
    const cplx Bt = 2.0 * (a - 1.0) * (b - 1.0) / (c - 2.0) * (x - y) * (z - x) / (z - y);
    const cplx Ct = printed_prefactor ? C / ((z - y) * (z - y)) : 1.0 / (C * (z - y));
    const cplx J2 = Ct * At * hyp2f1(1.0 - a, 1.0 - b, 2.0 - c, sv) + Ct * Bt * hyp2f1(2.0 - a, 2.0 - b, 3.0 - c, sv);
    return {J1, J2};
}

IntegralSet transcendental_invariants(const SystemState &s, BranchTracker *t)
{
    IntegralSet out;
    out.system = s.tag();
    const auto &v = s.v;
    auto put = [&](cplx J1, cplx J2) {
        out.transcendental.push_back({"J1", J1});
        out.transcendental.push_back({"J2", J2});
    };
    switch (s.tag()) {
    case SystemTag::Jacobi9: {
        const cplx Iv = tracked_root(t, "I", v[2] * v[2] + 32.0 * v[3]);
        require(!tiny(Iv), "a^2 + 32 b = 0");
        const cplx k = tracked_root(t, "k", 0.5 - v[2] / (2.0 * Iv));
        const MixedIntegrals m = mixed_integrals(v[0], v[1], k, Iv, tracked_root(t, "kprime", 1.0 - k * k));
        put(m.J1, m.J2);
        break;
    }
    case SystemTag::Intermediate25: {
        const MixedIntegrals m = mixed_integrals(v[0], v[1], v[2], v[3], tracked_root(t, "kprime", 1.0 - v[2] * v[2]));
        put(m.J1, m.J2);
        break;
    }
    case SystemTag::Canonical19: {
        const CanonicalIntegrals ci = canonical_integrals(s, t);
        put(ci.J1, ci.J2);
        break;
    }
    case SystemTag::DarbouxHalphen2: {
        const auto j = dh_integrals(v[0], v[1], v[2], t);
        put(j[0], j[1]);
        break;
    }
    case SystemTag::Ramamani44: {
        const cplx pii = pi * I;
        const double kappa = -1.0;
        const cplx X = pii * v[0] / 2.0, sum = pii * v[1], prod = pi * pi * v[2] / (4.0 * kappa);
        const cplx disc = tracked_root(t, "disc", sum * sum - 4.0 * prod);
        const cplx p = (sum + disc) / 2.0, q = sum - p;
        const auto j = dh_integrals(X, X - p, X - q, t);
        put(j[0], j[1]);
        break;
    }
    case SystemTag::Weierstrass3: {
        TransformOptions o;
        if (t && t->previous("X")) {
            o.reference = std::array<cplx, 3>{*t->previous("X"), *t->previous("Y"), *t->previous("Z")};
        }
        const SystemState dh = transform_state(s, SystemTag::DarbouxHalphen2, o);
        if (t) {
            t->set("X", dh.v[0]);
            t->set("Y", dh.v[1]);
            t->set("Z", dh.v[2]);
        }
        const auto j = dh_integrals(dh.v[0], dh.v[1], dh.v[2], t);
        put(j[0], j[1]);
        break;
    }
    case SystemTag::HalphenBrioschi57: {
        const auto j = hb_integrals(s, t);
        put(j[0], j[1]);
        break;
    }
    default:
        throw UnsupportedSystem("no transcendental integrals for " + std::string(system_name(s.tag())));
    }
    return out;
}

std::array<cplx, 2> legendre_candidate_values(const SystemState &w3, const LegendreCandidate &p)
{
    if (w3.tag() != SystemTag::Weierstrass3) {
        throw UnsupportedSystem("Legendre candidates are defined on weierstrass3 states");
    }
    const cplx g2 = w3.v[0], g3 = w3.v[1], eta = w3.v[2];
    const cplx w = std::pow(g3 * g3 - g2 * g2 * g2 / 27.0, p.w_exponent);
    const cplx pref = std::pow(g2 * w, 1.0 / 3.0);
    const cplx zz = g3 * w;
    const cplx lin = (g3 - 2.0 / 3.0 * eta * g2) * w;
    const LegendrePQ a = legendre_PQ(p.nu, p.mu, zz);
    const LegendrePQ b = legendre_PQ(-p.nu, p.mu, zz);
    return {pref * (a.P - lin * b.P), pref * (a.Q - lin * b.Q)};
}

double legendre_candidate_rate(const SystemState &w3, const LegendreCandidate &p)
{
    if (w3.tag() != SystemTag::Weierstrass3) {
        throw UnsupportedSystem("Legendre candidates are defined on weierstrass3 states");
    }
    using S2 = Series<2>;
    const auto x = taylor_flow<2>(w3);
    const S2 &g2 = x[0], &g3 = x[1], &eta = x[2];
    const S2 w = pow(g3 * g3 - g2 * g2 * g2 / S2(27.0), cplx(p.w_exponent));
    const S2 pref = pow(g2 * w, cplx(1.0 / 3.0));
    const S2 zz = g3 * w;
    const S2 lin = (g3 - S2(2.0 / 3.0) * eta * g2) * w;
    const LegendrePQSeries a = legendre_PQ_series(p.nu, p.mu, zz);
    const LegendrePQSeries b = legendre_PQ_series(-p.nu, p.mu, zz);
    const S2 J1 = pref * (a.P - lin * b.P);
    const S2 J2 = pref * (a.Q - lin * b.Q);
    double worst = 0.0;
    for (const S2 *J : {&J1, &J2}) {
        const double rate = std::abs(J->c[1]) / std::max(std::abs(J->c[0]), 1e-300);
        worst = std::max(worst, std::isfinite(rate) ? rate : std::numeric_limits<double>::infinity());
    }
    return worst;
}

std::vector<CandidateScore> legendre_candidate_scan(const SystemState &w3)
{
    const std::array<double, 4> exponents{-0.5, 1.0 / 3.0, -1.0 / 3.0, 0.5};
    const std::array<double, 8> indices{0.5, -0.5, 1.0 / 3.0, -1.0 / 3.0, 1.0 / 6.0, -1.0 / 6.0, 2.0 / 3.0, -2.0 / 3.0};
    std::vector<CandidateScore> out;
    for (double e : exponents) {
        for (double nu : indices) {
            for (double mu : indices) {
                const LegendreCandidate p{e, nu, mu};
                try {
                    const double r = legendre_candidate_rate(w3, p);
                    if (std::isfinite(r)) {
                        out.push_back({p, r});
                    }
                } catch (const Error &) {
                }
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const CandidateScore &a, const CandidateScore &b) {
        return a.rate < b.rate;
    });
    return out;
}

void annotate_invariants(Trajectory &tr, bool transcendental)
{
    tr.invariant_names.clear();
    tr.invariants.clear();
    if (tr.samples.empty()) {
        return;
    }
    BranchTracker tracker;
    bool use_alg = true, use_tr = transcendental;
    auto eval = [&](const SystemState &s, bool first) {
        std::vector<NamedValue> row;
        if (use_alg) {
            try {
                const auto a = algebraic_invariants(s);
                row.insert(row.end(), a.algebraic.begin(), a.algebraic.end());
            } catch (const Error &) {
                if (first) {
                    use_alg = false;
                } else {
                    throw;
                }
            }
        }
        if (use_tr) {
            try {
                const auto t = transcendental_invariants(s, &tracker);
                row.insert(row.end(), t.transcendental.begin(), t.transcendental.end());
            } catch (const Error &) {
                if (first) {
                    use_tr = false;
                } else {
                    throw;
                }
            }
        }
        return row;
    };
    const auto first = eval(tr.state(0), true);
    for (const auto &nv : first) {
        tr.invariant_names.push_back(nv.name);
    }
    const std::size_t ncol = first.size();
    auto values = [](const std::vector<NamedValue> &r) {
        std::vector<cplx> v;
        for (const auto &nv : r) {
            v.push_back(nv.value);
        }
        return v;
    };
    tr.invariants.push_back(values(first));
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        try {
            auto row = values(eval(tr.state(i), false));
            row.resize(ncol, cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
            tr.invariants.push_back(std::move(row));
        } catch (const Error &) {
            tr.invariants.emplace_back(ncol, cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
        }
    }
}

std::vector<std::pair<std::string, double>> invariant_drift(const Trajectory &tr, double floor)
{
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t j = 0; j < tr.invariant_names.size(); ++j) {
        const cplx v0 = tr.invariants.front()[j];
        double d = 0.0;
        for (const auto &row : tr.invariants) {
            const double e = std::abs(row[j] - v0) / std::max(std::abs(v0), floor);
            d = std::isnan(e) ? std::numeric_limits<double>::infinity() : std::max(d, e);
        }
        out.emplace_back(tr.invariant_names[j], d);
    }
    return out;
}

Report identity_report(const Tau &tau, const IdentityThresholds &th)
{
    static const std::array<const char *, 19> names{
        "theta_quartic",    "log_derivative_23", "log_derivative_34", "log_derivative_24", "eta_log_sum",
        "theta_flow_2",     "theta_flow_3",      "theta_flow_4",      "eta_flow",          "duplication_eta",
        "duplication_g2",   "g2_conventions",    "g3_conventions",    "legendre_relation", "modular_K",
        "modular_Kprime",   "modular_E",         "modular_Eprime",    "schwarzian",
    };
    Report rep;
    ThetaQuad q, q2;
    try {
        q = theta_quad(tau, 3);
        q2 = theta_quad(Tau(2.0 * tau.value()), 0);
    } catch (const Error &e) {
        for (const char *n : names) {
            rep.push_back(error_row(n, e, n == std::string("legendre_relation") ? th.legendre : th.relative));
        }
        return rep;
    }
    const double r = th.relative;
    const cplx t2 = q.theta2(), t3 = q.theta3(), t4 = q.theta4(), eta = q.eta();
    const cplx d2 = q.theta2(1), d3 = q.theta3(1), d4 = q.theta4(1), deta = q.eta(1);
    const cplx f2 = std::pow(t2, 4), f3 = std::pow(t3, 4), f4 = std::pow(t4, 4);
    const cplx i = I;
    const double p = pi, p2 = pi * pi;

    rep.push_back(make_row(names[0], rel_residual(f3, f2 + f4), r));
    rep.push_back(make_row(names[1], rel_residual(d2 / t2 - d3 / t3, p / 4.0 * i * f4), r));
    rep.push_back(make_row(names[2], rel_residual(d3 / t3 - d4 / t4, p / 4.0 * i * f2), r));
    rep.push_back(make_row(names[3], rel_residual(d2 / t2 - d4 / t4, p / 4.0 * i * f3), r));
    rep.push_back(make_row(names[4], rel_residual(d2 / t2 + d3 / t3 + d4 / t4, 3.0 * i * eta / p), r));

    const std::vector<cplx> V = vector_field(SystemState(SystemTag::Symmetric8, {t2, t3, t4, eta}));
    rep.push_back(make_row(names[5], rel_residual(d2, V[0]), r));
    rep.push_back(make_row(names[6], rel_residual(d3, V[1]), r));
    rep.push_back(make_row(names[7], rel_residual(d4, V[2]), r));
    rep.push_back(make_row(names[8], rel_residual(deta, V[3]), r));

    const ModularForms mf = modular_forms(q);
    const ModularForms mf2 = modular_forms(q2);
    const Duplication dup = duplication_values(q, eta, mf.g2);
    rep.push_back(make_row(names[9], rel_residual(dup.eta_2tau, q2.eta()), r));
    rep.push_back(make_row(names[10], rel_residual(dup.g2_2tau, mf2.g2), r));
    rep.push_back(make_row(names[11], rel_residual(mf.g2, mf.g2_sym), r));
    rep.push_back(make_row(names[12], rel_residual(mf.g3, mf.g3_sym), r));

    const cplx s3 = t3 * t3;
    const cplx k = t2 * t2 / s3, kp = t4 * t4 / s3;
    rep.push_back(guarded_row(names[13], th.legendre, [&] {
        return rel_residual(legendre_level(legendre_quad(Modulus(k, kp))), p / 2.0);
    }));
    const cplx h = tau.value();
    const std::array<cplx, 4> model{
        p / 2.0 * s3,
        p / (2.0 * i) * h * s3,
        2.0 / (p * s3) * (eta + p2 / 12.0 * (f3 + f4)),
        2.0 * i / (p * s3) * (h * eta - p2 / 12.0 * (f2 + f3) * h - p * i / 2.0),
    };
    for (int j = 0; j < 4; ++j) {
        rep.push_back(guarded_row(names[14 + j], r, [&] {
            const LegendreQuad lq = legendre_quad(Modulus(k, kp));
            const std::array<cplx, 4> got{lq.K, lq.Kprime, lq.E, lq.Eprime};
            return rel_residual(got[j], model[j]);
        }));
    }

    rep.push_back(guarded_row(names[18], r, [&] {
        const Series<3> ratio = theta_series(q, th2) / theta_series(q, th3);
        const Series<3> r2 = ratio * ratio;
        const Series<3> lam = r2 * r2;
        const cplx l = lam.c[0], l1 = lam.c[1], l2 = 2.0 * lam.c[2], l3 = 6.0 * lam.c[3];
        const cplx lhs = l3 / std::pow(l1, 3) - 1.5 * l2 * l2 / std::pow(l1, 4);
        const cplx rhs = -0.5 * (l * l - l + 1.0) / (l * l * (l - 1.0) * (l - 1.0));
        return rel_residual(lhs, rhs);
    }));
    return rep;
}

ChazyResiduals chazy_residuals(const SystemState &s)
{
    if (s.tag() != SystemTag::Canonical19) {
        throw UnsupportedSystem("Chazy residuals are taken along canonical19");
    }
    const auto x = taylor_flow<3>(s);
    const Series<3> &u = x[3];
    const cplx u0 = u.c[0], u1 = u.c[1], u2 = 2.0 * u.c[2], u3 = 6.0 * u.c[3];
    const cplx a = 2.0 * u0 * u2, b = 3.0 * u1 * u1;
    const double scale_c = std::max({std::abs(u3), std::abs(a), std::abs(b), 1e-300});
    const double scale_p = std::max({std::abs(u3), 6.0 * std::abs(a), 6.0 * std::abs(b), 1e-300});
    return {std::abs(u3 - (a - b)) / scale_c, std::abs(u3 - 6.0 * (a - b)) / scale_p};
}

cplx c_equation_value(const SystemState &s, int component, double *scale)
{
    if (s.tag() != SystemTag::Canonical19) {
        throw UnsupportedSystem("the C-equation is taken along canonical19");
    }
    require(component >= 0 && component < 3 && !tiny(s.v[static_cast<std::size_t>(component)]),
            "C = 1 / component needs a nonzero component");
    const auto x = taylor_flow<3>(s);
    const Series<3> C = Series<3>(1.0) / component_series(x, component);
    require(!flat(C), "second derivative of C vanishes");
    return c_expression(C, scale);
}

cplx c_tilde_rate(const SystemState &s, double *scale)
{
    if (s.tag() != SystemTag::Canonical19) {
        throw UnsupportedSystem("the C-equation is taken along canonical19");
    }
    require(!tiny(s.v[0]), "x = 0");
    using S5 = Series<5>;
    const auto x = taylor_flow<5>(s);
    const S5 C = S5(1.0) / x[0];
    const S5 d1 = C.derivative(), d2 = d1.derivative(), d3 = d2.derivative();
    require(!flat(C), "second derivative of C vanishes");
    const S5 l = S5(3.0) * d1 / C + d3 / d2;
    const S5 C3 = C * C * C;
    const S5 t1 = C3 * C * l * l;
    const S5 t2 = S5(16.0) * C3 * d2;
    if (scale) {
        *scale = std::max({std::abs(t1.c[1]), std::abs(t2.c[1]), 1e-300});
    }
    return t1.c[1] - t2.c[1];
}

cplx theta_c_value(const Tau &tau, int j)
{
    if (j != 3 && j != 4) {
        throw ParameterError("theta index must be 3 or 4");
    }
    const ThetaQuad q = theta_quad(tau, 3);
    const Series<3> t = theta_series(q, j == 3 ? th3 : th4);
    const Series<3> C = Series<3>(1.0) / (t * t);
    return c_expression(C);
}

Report ode_residual_report(const SystemState &s, std::optional<Tau> tau, const OdeThresholds &th)
{
    Report rep;
    // Chazy: the candidate that vanishes and how well the other is excluded.
    try {
        const ChazyResiduals c = chazy_residuals(s);
        const bool printed_wins = c.printed <= c.classical;
        rep.push_back(make_row(printed_wins ? "chazy_printed" : "chazy_classical", std::min(c.printed, c.classical),
                               th.chazy));
        const double lo = std::min(c.printed, c.classical), hi = std::max(c.printed, c.classical);
        rep.push_back(make_row("chazy_separation", hi > 0.0 ? lo / hi : std::numeric_limits<double>::infinity(), 1e-6));
    } catch (const Error &e) {
        rep.push_back(error_row("chazy_printed", e, th.chazy));
        rep.push_back(error_row("chazy_separation", e, 1e-6));
    }
    rep.push_back(guarded_row("c_equation_y", th.c_equation, [&] { return rel_residual(c_equation_value(s, 1), 36.0); }));
    rep.push_back(guarded_row("c_equation_z", th.c_equation, [&] { return rel_residual(c_equation_value(s, 2), 36.0); }));
    rep.push_back(guarded_row("c_tilde_constant", th.c_equation, [&] {
        require(!tiny(s.v[0]), "x = 0");
        const cplx k = 6.0 * (s.v[1] * s.v[1] - s.v[2] * s.v[2]) / (s.v[0] * s.v[0]);
        // k^2 is small against the two terms when y is close to z
        double scale = 1.0;
        const cplx v = c_equation_value(s, 0, &scale);
        return std::abs(v - k * k) / std::max(scale, std::abs(k * k));
    }));
    rep.push_back(guarded_row("c_tilde_fourth_order", th.c_tilde, [&] {
        double scale = 1.0;
        const cplx r = c_tilde_rate(s, &scale);
        return std::abs(r) / scale;
    }));
    if (tau) {
        rep.push_back(guarded_row("theta_c_equation_3", th.theta_c, [&] {
            return rel_residual(theta_c_value(*tau, 3), -pi * pi);
        }));
        rep.push_back(guarded_row("theta_c_equation_4", th.theta_c, [&] {
            return rel_residual(theta_c_value(*tau, 4), -pi * pi);
        }));
        // C_y = C_theta / c with c^4 = (pi i / 6)^2 carries 36 to 36 c^4 = -pi^2.
        rep.push_back(guarded_row("c_constant_scaling", th.theta_c, [&] {
            const cplx c = std::sqrt(pi * I / 6.0);
            const cplx lhs = theta_c_value(*tau, 3);
            const cplx rhs = std::pow(c, 4) * c_equation_value(canonical_state(*tau), 1);
            return rel_residual(lhs, rhs);
        }));
    }
    rep.push_back(make_row("c_constant_law", rel_residual(36.0 * std::pow(std::sqrt(pi * I / 6.0), 4), -pi * pi),
                           th.scaling));
    return rep;
}

} // namespace modflow
