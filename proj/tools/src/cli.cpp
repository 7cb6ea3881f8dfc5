#include "pvi_lab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "pvi/errors.hpp"
#include "pvi/painleve.hpp"
#include "pvi/parallel.hpp"
#include "pvi/torsion.hpp"
#include "pvi/zeros.hpp"
#include "pvi_acceptance/acceptance.hpp"

namespace pvi::lab
{

namespace
{

struct Flags {
    std::string N, r, s, tau, domain, out, format = "json", grid = "tau";
    double T = 10.0, tol = 1e-9;
    int threads = 0;
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    int nx = 21, ny = 21;
    std::vector<int> criteria;
};

json cjson(cplx z)
{
    return json{{"re", z.real()}, {"im", z.imag()}};
}

json matrix_json(const ModularMatrix &g)
{
    return json::array({g.a(), g.b(), g.c(), g.d()});
}

std::string pair_label(const RationalPair &p)
{
    return "(" + p.to_string() + ")";
}

json certificate_json(const ZeroCertificate &z)
{
    return json{{"tau", cjson(z.tau0)},
                {"residual", z.residual},
                {"relative_residual", z.residual / z.scale},
                {"dz_mag", z.dz_mag},
                {"scale", z.scale},
                {"newton_iters", z.newton_iters},
                {"region", to_string(z.region)},
                {"pair", z.torsion.to_string()},
                {"numerator_relative", z.numerator_relative}};
}

std::int64_t require_N(const Flags &f)
{
    if (f.N.empty()) {
        throw InvalidArgument("--N is required");
    }
    std::int64_t N = 0;
    try {
        std::size_t used = 0;
        N = std::stoll(f.N, &used);
        if (used != f.N.size()) {
            throw std::invalid_argument(f.N);
        }
    } catch (const std::logic_error &) {
        throw InvalidArgument("--N must be an integer, got '" + f.N + "'");
    }
    if (N < 3) {
        throw InvalidArgument("--N must be at least 3");
    }
    return N;
}

TorsionPair require_pair(const Flags &f, Report &rep)
{
    if (f.r.empty() || f.s.empty()) {
        throw InvalidArgument("--r and --s are required");
    }
    rep.inputs["r"] = f.r;
    rep.inputs["s"] = f.s;
    const TorsionPair p = make_pair(parse_parameter(f.r), parse_parameter(f.s));
    rep.inputs["pair"] = p.to_string();
    return p;
}

ModuliPoint require_tau(const Flags &f, Report &rep)
{
    if (f.tau.empty()) {
        throw InvalidArgument("--tau is required");
    }
    rep.inputs["tau"] = f.tau;
    return ModuliPoint(parse_complex(f.tau));
}

DomainSpec domain_of(const Flags &f, DomainKind fallback, Report &rep)
{
    const DomainKind k = f.domain.empty() ? fallback : parse_domain(f.domain);
    rep.inputs["domain"] = to_string(k);
    rep.inputs["T"] = f.T;
    return DomainSpec::make(k, f.T);
}

int resolved_threads(const Flags &f)
{
    int t = f.threads;
    if (t <= 0) {
        if (const char *env = std::getenv("PVI_LAB_THREADS")) {
            t = std::atoi(env);
        }
    }
    return resolve_threads(t);
}

// Residuals of the closed forms known for a few small pairs.
std::optional<json> algebraic_check(const TorsionPair &p, const SolutionValue &v)
{
    if (!p.exact() || v.lambda_infinite) {
        return std::nullopt;
    }
    const RationalPair e = *p.exact();
    const cplx l = v.lambda, t = v.t;
    std::string relation;
    cplx lhs, rhs;
    if (e == RationalPair{1, 0, 4}) {
        relation = "9 lambda^2 = t";
        lhs = 9.0 * l * l;
        rhs = t;
    } else if (e == RationalPair{0, 1, 4}) {
        relation = "9 (lambda - 1)^2 = 1 - t";
        lhs = 9.0 * (l - 1.0) * (l - 1.0);
        rhs = 1.0 - t;
    } else if (e == RationalPair{1, 1, 4}) {
        relation = "9 (lambda - t)^2 = t (t - 1)";
        lhs = 9.0 * (l - t) * (l - t);
        rhs = t * (t - 1.0);
    } else if (e == RationalPair{1, 0, 3}) {
        relation = "3 lambda^4 - 4 t lambda^3 - 4 lambda^3 + 6 t lambda^2 = t^2";
        const cplx l2 = l * l;
        lhs = 3.0 * l2 * l2 - 4.0 * t * l2 * l - 4.0 * l2 * l + 6.0 * t * l2;
        rhs = t * t;
    } else {
        return std::nullopt;
    }
    return json{{"relation", relation},
                {"residual", std::abs(lhs - rhs)},
                {"relative_residual", std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs))}};
}

int run_eval(const Flags &f, Report &rep)
{
    const TorsionPair p = require_pair(f, rep);
    const ModuliPoint m = require_tau(f, rep);
    rep.inputs["tol"] = f.tol;
    const SolutionValue v = lambda_rs(p, m);
    json &res = rep.results;
    res["tau"] = cjson(m.tau());
    res["t"] = cjson(v.t);
    res["alpha"] = cjson(v.alpha);
    res["e"] = json::array({cjson(v.e1), cjson(v.e2), cjson(v.e3)});
    res["wp_p"] = v.wp_infinite ? json(nullptr) : cjson(v.wp_p);
    res["lambda"] = v.lambda_infinite ? json(nullptr) : cjson(v.lambda);
    res["lambda_infinite"] = v.lambda_infinite;
    res["path"] = v.path == WpPath::Direct ? "direct" : "expansion";
    res["branch"] = json{{"label", v.branch.label},
                         {"gamma_mod2", v.branch.gamma_mod2},
                         {"tau_in_F", cjson(v.branch.tau_in_F)}};
    if (auto check = algebraic_check(p, v)) {
        res["algebraic_check"] = *check;
    }
    if (p.is_real()) {
        const auto terms = premodular_terms(p, m);
        rep.diagnostics["z2_est_error"] = terms.est_error;
        rep.diagnostics["z2_scale"] = terms.scale;
    }

    try {
        const auto pt = pole_test(p, m, f.tol);
        json pj{{"is_pole", pt.is_pole}, {"kind", to_string(pt.kind)}, {"relative_z2", pt.relative_z2}};
        if (pt.expansion) {
            pj["expansion"] = json{{"c0", cjson(pt.expansion->c0)},
                                   {"alpha", cjson(pt.expansion->alpha)},
                                   {"leading", pt.expansion->leading_infinite ? json(nullptr)
                                                                              : cjson(pt.expansion->leading)}};
        }
        if (pt.certificate) {
            pj["certificate"] = certificate_json(*pt.certificate);
        }
        res["pole_test"] = pj;
    } catch (const Inconclusive &e) {
        res["pole_test"] = json{{"inconclusive", true}};
        rep.diagnostics["error"] = json{{"name", e.name()}, {"message", e.what()}};
        return Numerical;
    }
    return Success;
}

int run_zeros(const Flags &f, Report &rep)
{
    const TorsionPair p = require_pair(f, rep);
    const DomainSpec d = domain_of(f, DomainKind::F0, rep);
    const auto w = winding_count(p, d);
    const auto zeros = locate_zeros(p, d);
    json &res = rep.results;
    res["triangle"] = to_string(classify_triangle(p));
    res["winding"] = w.winding;
    res["zeros"] = json::array();
    for (const auto &z : zeros) {
        res["zeros"].push_back(certificate_json(z));
    }
    rep.diagnostics["contour"] = json{{"turns", w.turns}, {"samples", w.samples}, {"min_relative", w.min_relative}};
    return Success;
}

int run_count(const Flags &f, Report &rep)
{
    const std::int64_t N = require_N(f);
    rep.inputs["N"] = N;
    const DomainSpec d = domain_of(f, DomainKind::F, rep);
    const int threads = resolved_threads(f);
    json &res = rep.results;
    const auto pc = pole_count(N);
    res["P"] = p_of_n(N);
    res["qn_size"] = qn_size(N);
    res["solutions"] = pc.num_solutions;
    res["poles_per_solution"] = pc.poles_per_solution;

    const auto mn = count_mn_zeros(N, d, threads);
    json located{{"domain", to_string(mn.domain)}, {"interior_count", mn.interior_count}, {"hits", mn.hits}};
    located["zeros"] = json::array();
    for (const auto &z : mn.certificates) {
        located["zeros"].push_back(certificate_json(z));
    }
    located["ambiguities"] = json::array();
    for (const auto &a : mn.ambiguities) {
        located["ambiguities"].push_back(json{{"tau", cjson(a.tau)}, {"a", pair_label(a.a)}, {"b", pair_label(a.b)}});
    }
    res["located"] = located;

    if (d.kind == DomainKind::F) {
        const auto v = valence_check(N, threads);
        res["valence"] = json{{"interior", v.interior},
                              {"cusp", v.cusp_formula},
                              {"cusp_numeric", v.cusp_numeric},
                              {"total", v.total},
                              {"qn_over_4", v.qn_over_4},
                              {"balanced", v.balanced},
                              {"cusp_agrees", v.cusp_agrees},
                              {"log_abs_at_i", v.log_abs_at_i},
                              {"log_abs_at_rho", v.log_abs_at_rho}};
    }
    return Success;
}

int run_orbits(const Flags &f, Report &rep)
{
    const std::int64_t N = require_N(f);
    rep.inputs["N"] = N;
    const auto classes = orbit_brute_force(N);
    const RationalPair standard[3] = {RationalPair::normalized(0, 1, N), RationalPair::normalized(1, 0, N),
                                      RationalPair::normalized(1, 1, N)};
    json &res = rep.results;
    res["qn_size"] = qn_size(N);
    res["class_count"] = classes.size();
    res["classes"] = json::array();
    for (const auto &cls : classes) {
        json c{{"size", cls.size()}, {"members", json::array()}, {"representatives", json::array()}};
        for (const auto &p : cls) {
            c["members"].push_back(pair_label(p));
        }
        for (const auto &p : standard) {
            if (std::binary_search(cls.begin(), cls.end(), canonical_sign(p))) {
                c["representatives"].push_back(pair_label(p));
            }
        }
        res["classes"].push_back(c);
    }
    res["elements"] = json::array();
    bool all = true;
    for (const auto &p : enumerate_qn(N)) {
        auto o = classify_orbit(p);
        const bool ok = o.verified && verify_orbit(o);
        all = all && ok;
        res["elements"].push_back(json{{"pair", pair_label(p)},
                                       {"representative", pair_label(o.representative)},
                                       {"gamma", matrix_json(o.gamma_witness)},
                                       {"sign", o.sign},
                                       {"shift", o.shift},
                                       {"verified", ok}});
    }
    res["all_verified"] = all;
    return Success;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> out(std::size_t(std::max(n, 1)));
    for (int i = 0; i < n; ++i) {
        out[std::size_t(i)] = n == 1 ? 0.5 * (a + b) : a + (b - a) * i / (n - 1);
    }
    return out;
}

struct ScanRow {
    double re = 0, im = 0;
    std::optional<cplx> value;
    std::optional<int> winding;
    std::string failure;
};

std::string csv_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15e", x);
    return buf;
}

int run_scan(const Flags &f, Report &rep, std::string &csv)
{
    if (f.grid != "tau" && f.grid != "rs") {
        throw InvalidArgument("--grid must be tau or rs");
    }
    if (f.nx < 1 || f.ny < 1 || std::int64_t(f.nx) * f.ny > 1000000) {
        throw InvalidArgument("--nx and --ny must be positive with nx * ny <= 1e6");
    }
    rep.inputs["grid"] = f.grid;
    rep.inputs["x_range"] = json::array({f.x_min, f.x_max});
    rep.inputs["y_range"] = json::array({f.y_min, f.y_max});
    rep.inputs["nx"] = f.nx;
    rep.inputs["ny"] = f.ny;
    const auto xs = linspace(f.x_min, f.x_max, f.nx), ys = linspace(f.y_min, f.y_max, f.ny);
    std::vector<ScanRow> rows(xs.size() * ys.size());
    const int threads = resolved_threads(f);

    if (f.grid == "tau") {
        const TorsionPair p = require_pair(f, rep);
        parallel_for(rows.size(), threads, [&](std::size_t k) {
            ScanRow &row = rows[k];
            row.re = xs[k % xs.size()];
            row.im = ys[k / xs.size()];
            try {
                row.value = z2(p, ModuliPoint(cplx(row.re, row.im)));
            } catch (const Error &e) {
                row.failure = e.name();
            }
        });
    } else {
        const DomainSpec d = domain_of(f, DomainKind::F0, rep);
        std::optional<ModuliPoint> m;
        if (!f.tau.empty()) {
            m = require_tau(f, rep);
        }
        parallel_for(rows.size(), threads, [&](std::size_t k) {
            ScanRow &row = rows[k];
            row.re = xs[k % xs.size()];
            row.im = ys[k / xs.size()];
            try {
                const TorsionPair p(row.re, row.im);
                if (m) {
                    row.value = z2(p, *m);
                }
                row.winding = winding_count(p, d).winding;
            } catch (const Error &e) {
                row.failure = e.name();
            }
        });
    }

    std::ostringstream out;
    out << "re,im,value_re,value_im,abs,winding\n";
    json jrows = json::array();
    std::map<std::string, int> failures;
    for (const auto &row : rows) {
        out << csv_number(row.re) << ',' << csv_number(row.im) << ',';
        if (row.value) {
            out << csv_number(row.value->real()) << ',' << csv_number(row.value->imag()) << ','
                << csv_number(std::abs(*row.value));
        } else {
            out << ",,";
        }
        out << ',';
        if (row.winding) {
            out << *row.winding;
        }
        out << '\n';
        if (!row.failure.empty()) {
            ++failures[row.failure];
        }
        jrows.push_back(json{{"re", row.re},
                             {"im", row.im},
                             {"value", row.value ? cjson(*row.value) : json(nullptr)},
                             {"winding", row.winding ? json(*row.winding) : json(nullptr)},
                             {"failure", row.failure.empty() ? json(nullptr) : json(row.failure)}});
    }
    csv = out.str();
    rep.results["columns"] = json::array({"re", "im", "value_re", "value_im", "abs", "winding"});
    rep.results["rows"] = jrows;
    rep.diagnostics["failed_cells"] = failures;
    return Success;
}

int run_verify(const Flags &f, Report &rep, std::string &messages)
{
    acceptance::Options opt;
    opt.threads = resolved_threads(f);
    std::vector<int> ids = f.criteria;
    if (ids.empty()) {
        for (int id = 1; id <= acceptance::criterion_count; ++id) {
            ids.push_back(id);
        }
    }
    rep.inputs["criteria"] = ids;
    json list = json::array(), timings = json::object();
    bool all = true;
    for (int id : ids) {
        const auto o = acceptance::run_criterion(id, opt);
        messages += acceptance::format_line(o) + "\n";
        all = all && o.passed();
        list.push_back(json{{"id", o.id},
                            {"title", o.title},
                            {"passed", o.passed()},
                            {"checks_passed", o.checks_passed},
                            {"limit_seconds", o.limit_seconds},
                            {"detail", o.detail}});
        timings["criterion_" + std::to_string(id)] = o.seconds;
    }
    rep.results["criteria"] = list;
    rep.results["all_passed"] = all;
    rep.diagnostics["timings"] = timings;
    return all ? Success : AcceptanceFailure;
}

bool is_usage_error(const Error &e)
{
    return e.name() == "InvalidArgument" || e.name() == "Degenerate" || e.name() == "DomainError";
}

void add_common(CLI::App *sub, Flags &f, bool pair, bool tau, bool N, bool domain)
{
    if (pair) {
        sub->add_option("--r", f.r, "r as p/q, decimal or a+bi");
        sub->add_option("--s", f.s, "s as p/q, decimal or a+bi");
    }
    if (tau) {
        sub->add_option("--tau", f.tau, "modulus as a+bi, Im > 0");
        sub->add_option("--tol", f.tol, "pole-test tolerance relative to the natural scale")->capture_default_str();
    }
    if (N) {
        sub->add_option("--N", f.N, "torsion order, N >= 3");
    }
    if (domain) {
        sub->add_option("--domain", f.domain, "F0, F or F2")->check(CLI::IsMember({"F0", "F", "F2"}));
        sub->add_option("--T", f.T, "truncation height")->capture_default_str();
    }
    sub->add_option("--out", f.out, "write the output here instead of stdout");
    sub->add_option("--format", f.format, "json or csv (csv for scan only)")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--threads", f.threads, "worker threads; 0 falls back to PVI_LAB_THREADS, then all cores");
}

} // namespace

Execution execute(const std::vector<std::string> &args)
{
    Execution ex;
    Flags f;
    CLI::App app{"Completely reducible Painleve VI solutions through premodular forms", "pvi-lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    auto *eval = app.add_subcommand("eval", "lambda_{r,s}, t and wp(p) at one modulus");
    add_common(eval, f, true, true, false, false);
    auto *zeros = app.add_subcommand("zeros", "zeros of Z2_{r,s} in a truncated fundamental domain");
    add_common(zeros, f, true, false, false, true);
    auto *count = app.add_subcommand("count", "P(N), pole counts, located zeros of M_N and the valence check");
    add_common(count, f, false, false, true, true);
    auto *orbits = app.add_subcommand("orbits", "Gamma(2) classification of Q_N");
    add_common(orbits, f, false, false, true, false);
    auto *scan = app.add_subcommand("scan", "CSV grid of Z2 over tau, or of winding numbers over (r, s)");
    add_common(scan, f, true, true, false, true);
    scan->add_option("--grid", f.grid, "tau: x + iy is tau; rs: (x, y) is (r, s)")->capture_default_str();
    scan->add_option("--x-min", f.x_min)->capture_default_str();
    scan->add_option("--x-max", f.x_max)->capture_default_str();
    scan->add_option("--y-min", f.y_min)->capture_default_str();
    scan->add_option("--y-max", f.y_max)->capture_default_str();
    scan->add_option("--nx", f.nx)->capture_default_str();
    scan->add_option("--ny", f.ny)->capture_default_str();
    auto *verify = app.add_subcommand("verify", "run the acceptance criteria; exit 0 iff all pass");
    add_common(verify, f, false, false, false, false);
    verify->add_option("criteria", f.criteria, "criterion numbers (default: all)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        std::ostringstream out, err;
        const int code = app.exit(e, out, err);
        ex.messages = out.str() + err.str();
        ex.exit_code = code == 0 ? Success : Usage;
        if (code != 0 && e.get_name() != "CallForHelp") {
            ex.messages += app.help();
        }
        return ex;
    }

    CLI::App *sub = app.get_subcommands().front();
    Report &rep = ex.report;
    rep.command = sub->get_name();
    if (f.format == "csv" && rep.command != "scan") {
        ex.exit_code = Usage;
        ex.messages = "--format csv is only available for scan\n" + sub->help();
        return ex;
    }
    if (f.threads) {
        rep.inputs["threads"] = f.threads;
    }

    std::string csv;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (rep.command == "eval") {
            ex.exit_code = run_eval(f, rep);
        } else if (rep.command == "zeros") {
            ex.exit_code = run_zeros(f, rep);
        } else if (rep.command == "count") {
            ex.exit_code = run_count(f, rep);
        } else if (rep.command == "orbits") {
            ex.exit_code = run_orbits(f, rep);
        } else if (rep.command == "scan") {
            ex.exit_code = run_scan(f, rep, csv);
        } else {
            ex.exit_code = run_verify(f, rep, ex.messages);
        }
    } catch (const Error &e) {
        rep.results = json::object();
        rep.diagnostics["error"] = json{{"name", e.name()}, {"message", e.what()}};
        ex.exit_code = is_usage_error(e) ? Usage : Numerical;
        ex.messages += std::string(e.what()) + "\n";
        if (ex.exit_code == Usage) {
            ex.messages += sub->help();
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.diagnostics["timings"]["total_seconds"] = seconds;

    ex.output = f.format == "csv" && ex.exit_code == Success ? csv : serialize(rep);
    if (!f.out.empty()) {
        std::ofstream file(f.out, std::ios::binary);
        if (!file || !(file << ex.output)) {
            ex.messages += "cannot write " + f.out + "\n";
            ex.exit_code = Usage;
        }
    }
    return ex;
}

} // namespace pvi::lab
