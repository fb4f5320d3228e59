#include "modflow/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modflow/conserved.hpp"
#include "modflow/elliptic.hpp"
#include "modflow/flows.hpp"
#include "modflow/integrate.hpp"
#include "modflow/qseries.hpp"
#include "modflow/suites.hpp"

namespace modflow::cli
{

namespace
{

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Global {
    std::string seed = "0xD1CE";
    double rtol = 1e-10;
    double atol = 1e-12;
    std::string format;
    std::string out;
};

struct Result {
    std::string body;
    int code = ok;
};

double parse_double(std::string_view s)
{
    while (!s.empty() && s.front() == ' ') {
        s.remove_prefix(1);
    }
    while (!s.empty() && s.back() == ' ') {
        s.remove_suffix(1);
    }
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
        throw UsageError("not a finite number: '" + std::string(s) + "'");
    }
    return v;
}

// "re,im" or "re"
cplx parse_complex(const std::string &s)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
        return {parse_double(s), 0.0};
    }
    if (s.find(',', comma + 1) != std::string::npos) {
        throw UsageError("expected re,im: '" + s + "'");
    }
    return {parse_double(std::string_view(s).substr(0, comma)), parse_double(std::string_view(s).substr(comma + 1))};
}

std::vector<double> parse_list(const std::string &s, std::size_t n)
{
    std::vector<double> v;
    std::size_t start = 0;
    while (true) {
        const auto c = s.find(',', start);
        v.push_back(parse_double(std::string_view(s).substr(start, c == std::string::npos ? c : c - start)));
        if (c == std::string::npos) {
            break;
        }
        start = c + 1;
    }
    if (v.size() != n) {
        throw UsageError("expected " + std::to_string(n) + " comma-separated numbers: '" + s + "'");
    }
    return v;
}

std::uint64_t parse_seed(const std::string &s)
{
    if (s.empty() || s.front() == '-' || s.front() == '+' || s.front() == ' ') {
        throw UsageError("seed must be a non-negative integer: '" + s + "'");
    }
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos, 0);
        if (pos != s.size()) {
            throw UsageError("seed must be a non-negative integer: '" + s + "'");
        }
        return v;
    } catch (const std::logic_error &) {
        throw UsageError("seed must be a non-negative integer: '" + s + "'");
    }
}

std::string num(double v, int digits = 17)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Rounded to 15 significant digits for printing.
double r15(double v) { return std::isfinite(v) ? std::strtod(num(v, 15).c_str(), nullptr) : v; }

json jnum(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    if (std::isnan(v)) {
        return nullptr;
    }
    return v > 0 ? "inf" : "-inf";
}

json jc(cplx c, bool round = false)
{
    return json::array({jnum(round ? r15(c.real()) : c.real()), jnum(round ? r15(c.imag()) : c.imag())});
}

std::vector<std::string> component_names(SystemTag t)
{
    switch (t) {
    case SystemTag::Symmetric8: return {"theta2", "theta3", "theta4", "eta"};
    case SystemTag::Jacobi9: return {"A", "B", "a", "b"};
    case SystemTag::Canonical19: return {"x", "y", "z", "u"};
    case SystemTag::Intermediate25: return {"A", "B", "k", "I"};
    case SystemTag::LegendreClosure28: return {"K", "Kp", "E", "Ep"};
    case SystemTag::DarbouxHalphen2: return {"X", "Y", "Z"};
    case SystemTag::Weierstrass3: return {"g2", "g3", "eta"};
    case SystemTag::Ramamani44: return {"P", "Pt", "Q"};
    case SystemTag::HalphenBrioschi57: return {"x", "y", "z"};
    }
    return {};
}

std::string resolve_format(const Global &g, const char *fallback)
{
    const std::string f = g.format.empty() ? fallback : g.format;
    if (f != "csv" && f != "json") {
        throw UsageError("--format must be csv or json");
    }
    return f;
}

void validate_tolerances(const Global &g)
{
    if (!(g.rtol >= 1e-13 && g.rtol <= 1e-6) || !(g.atol >= 1e-13 && g.atol <= 1e-6)) {
        throw UsageError("--rtol and --atol must lie in [1e-13, 1e-6]");
    }
}

// Named complex values: CSV "quantity,re,im" or a JSON object.
std::string named_values(const std::vector<std::pair<std::string, cplx>> &values, const std::string &format)
{
    if (format == "json") {
        json j = json::object();
        for (const auto &[k, v] : values) {
            j[k] = jc(v, true);
        }
        return j.dump(2) + "\n";
    }
    std::string s = "quantity,re,im\n";
    for (const auto &[k, v] : values) {
        s += k + "," + num(v.real(), 15) + "," + num(v.imag(), 15) + "\n";
    }
    return s;
}

// ---- eval ----

struct EvalArgs {
    std::string tau = "0,1";
    std::string k, kprime;
    std::string a, b, c, s;
    std::string side = "none";
};

Result eval_theta(const EvalArgs &e, const Global &g)
{
    const Tau tau(parse_complex(e.tau));
    const ThetaQuad q = theta_quad(tau);
    const cplx t2 = std::pow(q.theta2(), 4), t3 = std::pow(q.theta3(), 4), t4 = std::pow(q.theta4(), 4);
    return {named_values({{"theta2", q.theta2()},
                          {"theta3", q.theta3()},
                          {"theta4", q.theta4()},
                          {"eta", q.eta()},
                          {"jacobi_identity_residual", std::abs(t3 - t2 - t4)}},
                         resolve_format(g, "csv"))};
}

Result eval_forms(const EvalArgs &e, const Global &g)
{
    const Tau tau(parse_complex(e.tau));
    const ThetaQuad q = theta_quad(tau);
    const ModularForms f = modular_forms(q);
    return {named_values({{"g2", f.g2},
                          {"g3", f.g3},
                          {"g2_sym", f.g2_sym},
                          {"g3_sym", f.g3_sym},
                          {"E2", f.E2},
                          {"E4", f.E4},
                          {"E6", f.E6},
                          {"eta", q.eta()}},
                         resolve_format(g, "csv"))};
}

Result eval_elliptic(const EvalArgs &e, const Global &g)
{
    if (e.k.empty()) {
        throw UsageError("--k is required");
    }
    const cplx k = parse_complex(e.k);
    const Modulus m = e.kprime.empty() ? Modulus(k) : Modulus(k, parse_complex(e.kprime));
    const LegendreQuad q = legendre_quad(m);
    return {named_values({{"K", q.K},
                          {"Kprime", q.Kprime},
                          {"E", q.E},
                          {"Eprime", q.Eprime},
                          {"legendre_level", legendre_level(q)}},
                         resolve_format(g, "csv"))};
}

Result eval_hyp2f1(const EvalArgs &e, const Global &g)
{
    if (e.a.empty() || e.b.empty() || e.c.empty() || e.s.empty()) {
        throw UsageError("--a, --b, --c and --s are required");
    }
    CutSide side = CutSide::none;
    if (e.side == "above") {
        side = CutSide::above;
    } else if (e.side == "below") {
        side = CutSide::below;
    } else if (e.side != "none") {
        throw UsageError("--side must be none, above or below");
    }
    const cplx v = hyp2f1(parse_complex(e.a), parse_complex(e.b), parse_complex(e.c), parse_complex(e.s), side);
    return {named_values({{"hyp2f1", v}}, resolve_format(g, "csv"))};
}

// ---- flow ----

struct FlowArgs {
    std::string system;
    std::vector<std::string> state;
    std::string from_theta;
    std::vector<std::string> moebius;
    std::string eps;
    std::string jacobi_I;
    std::vector<std::string> hb;
    std::string t0, t1;
    int samples = 64;
    bool verify = false;
};

struct FlowSetup {
    SystemState init;
    cplx t0;
    std::optional<ClosedFormParams> closed;
};

FlowSetup flow_setup(const FlowArgs &a)
{
    const auto tag = parse_system(a.system);
    if (!tag) {
        throw UsageError("unknown system '" + a.system + "'");
    }
    SystemId id(*tag);
    if (!a.hb.empty()) {
        if (*tag != SystemTag::HalphenBrioschi57 || a.hb.size() != 3) {
            throw UsageError("--hb takes three values and applies to halphen_brioschi57 only");
        }
        id.hb = {parse_complex(a.hb[0]), parse_complex(a.hb[1]), parse_complex(a.hb[2])};
    }
    if (a.state.empty() == a.from_theta.empty()) {
        throw UsageError("give exactly one of --state and --from-theta");
    }
    FlowSetup f;
    if (!a.state.empty()) {
        if (!a.moebius.empty() || !a.eps.empty() || !a.jacobi_I.empty()) {
            throw UsageError("--moebius, --eps and --I need --from-theta");
        }
        std::vector<cplx> v;
        for (const auto &s : a.state) {
            v.push_back(parse_complex(s));
        }
        if (static_cast<int>(v.size()) != id.dimension()) {
            throw UsageError(std::string(system_name(*tag)) + " needs " + std::to_string(id.dimension()) +
                             " state components");
        }
        f.init = SystemState(id, v);
        if (a.t0.empty()) {
            throw UsageError("--t0 is required with --state");
        }
        f.t0 = parse_complex(a.t0);
        return f;
    }
    const cplx tau = parse_complex(a.from_theta);
    ClosedFormParams p;
    p.eps = std::sqrt(pi * I / 6.0);
    if (!a.moebius.empty()) {
        if (a.moebius.size() != 4) {
            throw UsageError("--moebius takes four values alpha beta gamma delta");
        }
        p.m = {parse_complex(a.moebius[0]), parse_complex(a.moebius[1]), parse_complex(a.moebius[2]),
               parse_complex(a.moebius[3])};
    }
    if (!a.eps.empty()) {
        p.eps = parse_complex(a.eps);
    }
    if (!a.jacobi_I.empty()) {
        if (*tag != SystemTag::Jacobi9) {
            throw UsageError("--I applies to jacobi9 only");
        }
        p.I = parse_complex(a.jacobi_I);
    }
    f.t0 = a.t0.empty() ? tau : parse_complex(a.t0);
    switch (*tag) {
    case SystemTag::Canonical19:
    case SystemTag::Jacobi9:
        f.init = closed_form_state(*tag, f.t0, p);
        f.closed = p;
        break;
    case SystemTag::Symmetric8:
        if (!a.moebius.empty() || !a.eps.empty()) {
            throw UsageError("symmetric8 theta states take no --moebius or --eps");
        }
        f.init = symmetric_state(Tau(f.t0));
        break;
    case SystemTag::Intermediate25:
    case SystemTag::DarbouxHalphen2:
    case SystemTag::Weierstrass3:
    case SystemTag::Ramamani44:
        f.init = transform_state(closed_form_state(SystemTag::Canonical19, f.t0, p), *tag);
        break;
    default:
        throw UsageError("no theta-generated state for " + std::string(system_name(*tag)));
    }
    return f;
}

Result cmd_flow(const FlowArgs &a, const Global &g, std::ostream &err)
{
    validate_tolerances(g);
    const std::string format = resolve_format(g, "csv");
    if (a.samples < 64 || a.samples > 100000) {
        throw UsageError("--samples must lie in [64, 100000]");
    }
    if (a.t1.empty()) {
        throw UsageError("--t1 is required");
    }
    const FlowSetup f = flow_setup(a);
    if (a.verify && !f.closed) {
        throw UsageError("--verify-closed-form needs --from-theta with canonical19 or jacobi9");
    }
    const cplx t1 = parse_complex(a.t1);
    IntegrateOptions opt;
    opt.rtol = g.rtol;
    opt.atol = g.atol;
    Trajectory tr = integrate_uniform(f.init, {f.t0, t1, false}, a.samples, opt);
    annotate_invariants(tr);

    std::vector<double> dev;
    double worst = 0.0;
    if (a.verify) {
        for (const Sample &s : tr.samples) {
            const SystemState c = closed_form_state(tr.system.tag, s.t, *f.closed);
            double e = 0.0, scale = 1e-300;
            for (std::size_t i = 0; i < c.v.size(); ++i) {
                e = std::max(e, std::abs(s.state[i] - c.v[i]));
                scale = std::max(scale, std::abs(c.v[i]));
            }
            dev.push_back(e / scale);
            worst = std::max(worst, e / scale);
        }
    }

    const auto names = component_names(tr.system.tag);
    Result r;
    if (format == "csv") {
        std::string s = "index,t_re,t_im";
        for (const auto &n : names) {
            s += "," + n + "_re," + n + "_im";
        }
        for (const auto &n : tr.invariant_names) {
            s += ",inv_" + n + "_re,inv_" + n + "_im";
        }
        s += ",error";
        if (a.verify) {
            s += ",closed_form_dev";
        }
        s += "\n";
        for (std::size_t j = 0; j < tr.samples.size(); ++j) {
            const Sample &x = tr.samples[j];
            s += std::to_string(j) + "," + num(x.t.real()) + "," + num(x.t.imag());
            for (const cplx &c : x.state) {
                s += "," + num(c.real()) + "," + num(c.imag());
            }
            for (const cplx &c : tr.invariants[j]) {
                s += "," + num(c.real()) + "," + num(c.imag());
            }
            s += "," + num(x.error);
            if (a.verify) {
                s += "," + num(dev[j]);
            }
            s += "\n";
        }
        r.body = s;
    } else {
        json j;
        j["system"] = std::string(system_name(tr.system.tag));
        j["components"] = names;
        j["invariants"] = tr.invariant_names;
        json rows = json::array();
        for (std::size_t k = 0; k < tr.samples.size(); ++k) {
            const Sample &x = tr.samples[k];
            json row;
            row["index"] = k;
            row["t"] = jc(x.t);
            json st = json::array();
            for (const cplx &c : x.state) {
                st.push_back(jc(c));
            }
            row["state"] = st;
            json inv = json::array();
            for (const cplx &c : tr.invariants[k]) {
                inv.push_back(jc(c));
            }
            row["invariants"] = inv;
            row["error"] = jnum(x.error);
            if (a.verify) {
                row["closed_form_dev"] = jnum(dev[k]);
            }
            rows.push_back(row);
        }
        j["samples"] = rows;
        if (a.verify) {
            j["closed_form_max_dev"] = jnum(worst);
        }
        r.body = j.dump(2) + "\n";
    }
    err << system_name(tr.system.tag) << ": " << tr.samples.size() << " samples, " << tr.stats.accepted
        << " steps\n";
    if (a.verify) {
        err << "closed-form deviation " << num(worst, 3) << (worst < 1e-8 ? "" : " exceeds 1e-8") << "\n";
        if (!(worst < 1e-8)) {
            r.code = check_failed;
        }
    }
    return r;
}

// ---- check ----

struct CheckArgs {
    std::string suite;
    int samples = 0;
    std::string region;
};

Result cmd_check(const CheckArgs &a, const Global &g, std::ostream &err)
{
    validate_tolerances(g);
    const std::string format = resolve_format(g, "json");
    SuiteConfig cfg;
    cfg.seed = parse_seed(g.seed);
    cfg.rtol = g.rtol;
    cfg.atol = g.atol;
    if (a.samples < 0 || a.samples > 10000) {
        throw UsageError("--samples must lie in [1, 10000]");
    }
    cfg.samples = a.samples;
    if (!a.region.empty()) {
        const auto v = parse_list(a.region, 4);
        cfg.re_lo = v[0];
        cfg.re_hi = v[1];
        cfg.im_lo = v[2];
        cfg.im_hi = v[3];
        if (!(cfg.re_lo < cfg.re_hi) || !(cfg.im_lo < cfg.im_hi)) {
            throw UsageError("--region needs re_lo < re_hi and im_lo < im_hi");
        }
    }
    const Report rep = run_suite(a.suite, cfg);
    Result r;
    if (format == "json") {
        json arr = json::array();
        for (const ReportRow &row : rep) {
            json j;
            j["check"] = row.check;
            j["residual"] = jnum(row.residual);
            j["threshold"] = jnum(row.threshold);
            j["pass"] = row.pass;
            if (!row.error.empty()) {
                j["error"] = row.error;
            }
            arr.push_back(j);
        }
        r.body = arr.dump(2) + "\n";
    } else {
        std::string s = "check,residual,threshold,pass\n";
        for (const ReportRow &row : rep) {
            s += row.check + "," + num(row.residual) + "," + num(row.threshold) + "," + (row.pass ? "true" : "false") +
                 "\n";
        }
        r.body = s;
    }
    const auto passed = std::count_if(rep.begin(), rep.end(), [](const ReportRow &x) { return x.pass; });
    err << a.suite << ": " << passed << "/" << rep.size() << " checks passed\n";
    r.code = all_pass(rep) ? ok : check_failed;
    return r;
}

int emit(const Result &r, const Global &g, std::ostream &out, std::ostream &err)
{
    if (g.out.empty()) {
        out << r.body;
        return r.code;
    }
    std::ofstream f(g.out, std::ios::binary);
    f << r.body;
    f.close();
    if (!f) {
        err << "error: cannot write '" << g.out << "'\n";
        return io;
    }
    return r.code;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Modular-form flows, integrals and brackets", "modflow"};
    app.require_subcommand(1, 1);
    Global g;
    app.add_option("--seed", g.seed, "random seed (decimal or 0x hex)");
    app.add_option("--rtol", g.rtol, "relative tolerance");
    app.add_option("--atol", g.atol, "absolute tolerance");
    app.add_option("--format", g.format, "csv or json");
    app.add_option("--out", g.out, "output file");

    EvalArgs ev;
    auto *eval = app.add_subcommand("eval", "evaluate special functions");
    eval->fallthrough();
    eval->require_subcommand(1, 1);
    auto *theta = eval->add_subcommand("theta", "theta2, theta3, theta4, eta at tau");
    theta->add_option("--tau", ev.tau, "re,im")->required();
    auto *forms = eval->add_subcommand("forms", "g2, g3 and Eisenstein series at tau");
    forms->add_option("--tau", ev.tau, "re,im")->required();
    auto *ell = eval->add_subcommand("elliptic", "K, K', E, E' at modulus k");
    ell->add_option("--k", ev.k, "re,im")->required();
    ell->add_option("--kprime", ev.kprime, "complementary modulus (branch)");
    auto *hyp = eval->add_subcommand("hyp2f1", "Gauss hypergeometric function");
    hyp->add_option("--a", ev.a)->required();
    hyp->add_option("--b", ev.b)->required();
    hyp->add_option("--c", ev.c)->required();
    hyp->add_option("--s", ev.s)->required();
    hyp->add_option("--side", ev.side, "none, above or below the cut");
    for (auto *s : {theta, forms, ell, hyp}) {
        s->fallthrough();
    }

    FlowArgs fl;
    auto *flow = app.add_subcommand("flow", "integrate a system on a uniform grid");
    flow->fallthrough();
    flow->add_option("--system", fl.system)->required();
    flow->add_option("--state", fl.state, "initial state, one re,im per component");
    flow->add_option("--from-theta", fl.from_theta, "theta-generated initial state at tau");
    flow->add_option("--moebius", fl.moebius, "alpha beta gamma delta");
    flow->add_option("--eps", fl.eps, "scale of x in the canonical closed form");
    flow->add_option("--I", fl.jacobi_I, "integral I of the jacobi9 closed form");
    flow->add_option("--hb", fl.hb, "a b c of halphen_brioschi57");
    flow->add_option("--t0", fl.t0);
    flow->add_option("--t1", fl.t1)->required();
    flow->add_option("--samples", fl.samples, "grid intervals (>= 64)");
    flow->add_flag("--verify-closed-form", fl.verify);

    CheckArgs ck;
    auto *check = app.add_subcommand("check", "run a verification suite");
    check->fallthrough();
    check->add_option("suite", ck.suite)
        ->required()
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(suite_names), std::end(suite_names))));
    check->add_option("--samples", ck.samples, "random samples (suite default if omitted)");
    check->add_option("--region", ck.region, "re_lo,re_hi,im_lo,im_hi");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return ok;
    } catch (const CLI::Success &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return usage;
    }

    try {
        (void)parse_seed(g.seed);
        validate_tolerances(g);
        if (!g.format.empty() && g.format != "csv" && g.format != "json") {
            throw UsageError("--format must be csv or json");
        }
        Result r;
        if (*eval) {
            if (*theta) r = eval_theta(ev, g);
            else if (*forms) r = eval_forms(ev, g);
            else if (*ell) r = eval_elliptic(ev, g);
            else r = eval_hyp2f1(ev, g);
        } else if (*flow) {
            r = cmd_flow(fl, g, err);
        } else {
            r = cmd_check(ck, g, err);
        }
        return emit(r, g, out, err);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return usage;
    } catch (const ParameterError &e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const StepUnderflow &e) {
        err << "error: " << e.what() << "; last good t = " << num(e.last_good().real(), 15) << ","
            << num(e.last_good().imag(), 15) << "\n";
        return domain;
    } catch (const DomainEscape &e) {
        err << "error: " << e.what() << "\n";
        return escape;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return domain;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return internal;
    }
}

} // namespace modflow::cli
