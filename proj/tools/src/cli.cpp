#include "xxz/cli.hpp"

#include "xxz/assembler.hpp"
#include "xxz/cache.hpp"
#include "xxz/contour.hpp"
#include "xxz/dressed.hpp"
#include "xxz/errors.hpp"
#include "xxz/output.hpp"
#include "xxz/saddle.hpp"
#include "xxz/strings.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace xxz::cli {

namespace {

struct RunConfig {
    std::string zeta;
    std::optional<double> q;
    std::optional<double> h;
    double J = 1.0;
    std::optional<double> v;
    int rmax = 8;
    int bound = 2;
    int order = 128;
    int s_gamma = 0;
    std::string out;
    std::string format = "json";
    std::string cache_dir;
    std::string suite = "quick";
    int verbosity = 0;
};

double parse_angle(const std::string& text)
{
    std::string s = text;
    double scale = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        scale = pi;
        s.resize(s.size() - 2);
        if (s.empty()) s = "1";
    }
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::invalid_argument, "cannot parse angle '" + text + "'");
    }
    if (used != s.size()) fail(ErrorKind::invalid_argument, "cannot parse angle '" + text + "'");
    return x * scale;
}

double require_zeta(const RunConfig& c)
{
    if (c.zeta.empty()) fail(ErrorKind::invalid_argument, "--zeta is required");
    return parse_angle(c.zeta);
}

std::optional<std::filesystem::path> cache_path(const RunConfig& c)
{
    if (c.cache_dir.empty()) return std::nullopt;
    return std::filesystem::path(c.cache_dir);
}

ModelParams model_params(const RunConfig& c)
{
    ModelParams p;
    p.J = c.J;
    p.zeta = require_zeta(c);
    p.q = c.q;
    p.h = c.h;
    p.order = c.order;
    if (!p.q && !p.h) fail(ErrorKind::invalid_argument, "one of --q or --h is required");
    return p;
}

DressedSet solve_model(const RunConfig& c)
{
    SolveOptions o;
    o.cache_dir = cache_path(c);
    return find_fermi_endpoint(model_params(c), o);
}

ojson model_meta(const DressedSet& ds)
{
    ojson m = ojson::object();
    m["zeta"] = ds.zeta();
    m["J"] = ds.J();
    m["q"] = ds.q();
    m["h"] = ds.h();
    m["order"] = ds.order();
    return m;
}

ojson warnings_json(const DressedSet& ds)
{
    ojson w = ojson::array();
    for (const auto& s : ds.warnings()) w.push_back(s);
    return w;
}

Report cmd_solve(const RunConfig& c)
{
    const DressedSet ds = solve_model(c);
    Report r;
    ojson row = model_meta(ds);
    row["h_c"] = ds.h_c();
    row["p_F"] = ds.p_F();
    row["v_F"] = fermi_velocity(ds);
    row["v_inf"] = v_infinity(ds);
    row["Z_q"] = ds.Z()(ds.q()).real();
    row["D"] = magnetization_density(ds);
    r.rows.push_back(row);
    r.meta["warnings"] = warnings_json(ds);
    return r;
}

Report cmd_strings(const RunConfig& c)
{
    const double zeta = require_zeta(c);
    std::optional<DressedSet> ds;
    if (c.q || c.h) ds = solve_model(c);
    Report r;
    r.meta["zeta"] = zeta;
    r.meta["rmax"] = c.rmax;
    r.table_name = "strings";
    const std::vector<StringSpec> specs = ds ? catalog(zeta, c.rmax, *ds) : [&] {
        std::vector<StringSpec> v;
        for (int k = 1; k <= c.rmax; ++k) v.push_back(string_exists(k, zeta));
        return v;
    }();
    for (const auto& s : specs) {
        ojson row;
        row["r"] = s.r;
        row["exists"] = s.exists;
        row["sigma"] = s.exists ? ojson(s.sigma) : ojson(nullptr);
        row["condition"] = s.regime;
        const auto entry = s.r >= 2 ? table_lookup(s.r, zeta) : std::nullopt;
        row["table_sign_p_prime"] = entry ? ojson(table_sign(*entry, zeta)) : ojson(nullptr);
        row["sign_p_prime"] = (ds && s.exists) ? ojson(s.sgn_p_prime) : ojson(nullptr);
        r.rows.push_back(row);
    }
    return r;
}

Report cmd_velocities(const RunConfig& c)
{
    const DressedSet ds = solve_model(c);
    const double v_inf = v_infinity(ds);
    Report r;
    r.meta = model_meta(ds);
    r.meta["v_F"] = fermi_velocity(ds);
    r.meta["v_inf"] = v_inf;
    r.meta["v_inf_limit_route"] = v_infinity_limit_route(ds);
    r.meta["warnings"] = warnings_json(ds);
    r.table_name = "species";
    for (int sp : species_list(ds, c.rmax)) {
        const SaddleCounter counter(sp, ds);
        const Thresholds t = estimate_thresholds(counter, v_inf, 1e-3 * v_inf);
        ojson row;
        row["species"] = sp;
        row["r"] = species_rank(sp);
        row["carrier_offset"] = carrier_offset(sp, ds.zeta());
        row["max_abs_velocity"] = counter.max_abs_velocity();
        row["v_min"] = t.v_min;
        row["v_max"] = t.v_max;
        r.rows.push_back(row);
    }
    return r;
}

double require_v(const RunConfig& c)
{
    if (!c.v) fail(ErrorKind::invalid_argument, "--v is required");
    return *c.v;
}

Report cmd_saddles(const RunConfig& c)
{
    const DressedSet ds = solve_model(c);
    const StructureReport st = classify_structure(require_v(c), ds, c.rmax);
    Report r;
    r.meta = model_meta(ds);
    r.meta["v"] = st.v;
    r.meta["v_F"] = st.v_F;
    r.meta["v_inf"] = st.v_inf;
    r.meta["v_max"] = st.v_max;
    r.meta["minimal"] = st.minimal;
    r.meta["regime"] = to_string(infer_regime(st));
    r.meta["n_sp"] = st.n_sp;
    r.meta["notes"] = st.notes;
    r.table_name = "saddles";
    for (const auto& sp : st.species)
        for (const auto& s : sp.saddles) {
            ojson row;
            row["species"] = s.species;
            row["r"] = s.r;
            row["omega_re"] = s.omega.real();
            row["omega_im"] = s.omega.imag();
            row["u_re"] = s.u_value.real();
            row["u_im"] = s.u_value.imag();
            row["u_second"] = s.u_second;
            row["eps_sign"] = s.eps_sign;
            row["v_min"] = sp.v_min;
            row["v_max"] = sp.v_max;
            r.rows.push_back(row);
        }
    return r;
}

Report cmd_exponents(const RunConfig& c)
{
    const DressedSet ds = solve_model(c);
    Report r;
    r.meta = model_meta(ds);
    r.meta["s_gamma"] = c.s_gamma;
    r.meta["bound"] = c.bound;
    if (!c.v) {
        // conformal exponents only
        const double Zq = ds.Z()(ds.q()).real();
        r.meta["Z_q"] = Zq;
        r.table_name = "conformal";
        for (int ell = -c.bound; ell <= c.bound; ++ell) {
            const RapiditySet Y = conformal_rapidities(ell, c.s_gamma);
            ojson row;
            row["ell"] = ell;
            for (int ups : {1, -1}) {
                const std::string tag = ups > 0 ? "plus" : "minus";
                row["theta_" + tag] = theta_upsilon(Y, ups, ds);
                row["closed_form_" + tag] = conformal_exponent_closed_form(ell, c.s_gamma, ups, Zq);
            }
            r.rows.push_back(row);
        }
        return r;
    }
    const double v = *c.v;
    const StructureReport st = classify_structure(v, ds, c.rmax);
    const Regime regime = infer_regime(st);
    const auto specs = catalog(ds.zeta(), c.rmax, ds);
    r.meta["v"] = v;
    r.meta["regime"] = to_string(regime);
    r.table_name = "terms";
    std::vector<AsymptoticTerm> terms;
    for (const auto& cfg : enumerate_configs(c.s_gamma, regime, c.bound, specs, st))
        terms.push_back(assemble_term(cfg, v, ds, st, regime));
    for (const auto& t : rank_terms(std::move(terms))) {
        ojson row;
        row["config"] = t.config.label();
        row["C_re"] = t.C_n.real();
        row["C_im"] = t.C_n.imag();
        row["delta_plus"] = t.delta_plus;
        row["delta_minus"] = t.delta_minus;
        row["delta_sp"] = t.delta_sp;
        row["decay_exponent"] = t.decay_exponent();
        row["phase"] = t.phase;
        row["wavevector"] = t.wavevector;
        row["amplitude"] = t.amplitude_placeholder.token;
        r.rows.push_back(row);
    }
    return r;
}

Report cmd_verify(const RunConfig& c, bool& all_pass)
{
    if (c.suite != "quick" && c.suite != "full")
        fail(ErrorKind::invalid_argument, "--suite must be quick or full");
    Report r;
    r.meta["suite"] = c.suite;
    r.table_name = "checks";
    all_pass = true;
    for (const auto& row : run_verify_suite(c.suite == "full")) {
        ojson j;
        j["identity"] = row.identity;
        j["params"] = row.params;
        j["lhs_re"] = row.lhs.real();
        j["lhs_im"] = row.lhs.imag();
        j["rhs_re"] = row.rhs.real();
        j["rhs_im"] = row.rhs.imag();
        j["rel_diff"] = row.rel_diff;
        j["tail_bound"] = row.tail_bound;
        j["tolerance"] = row.tolerance;
        j["pass"] = row.pass;
        all_pass = all_pass && row.pass;
        r.rows.push_back(j);
    }
    r.meta["pass"] = all_pass;
    return r;
}

DiskCache require_cache(const RunConfig& c)
{
    auto cache = DiskCache::resolve(cache_path(c));
    if (!cache) fail(ErrorKind::invalid_argument, "no cache directory: pass --cache-dir or set XXZ_CACHE_DIR");
    return *cache;
}

Report cmd_cache_list(const RunConfig& c)
{
    const DiskCache cache = require_cache(c);
    Report r;
    r.meta["cache_dir"] = cache.dir().string();
    r.table_name = "entries";
    for (const auto& e : cache.list()) {
        ojson row;
        row["file"] = e.path.filename().string();
        row["kind"] = e.kind;
        row["bytes"] = e.bytes;
        r.rows.push_back(row);
    }
    return r;
}

Report cmd_cache_clear(const RunConfig& c)
{
    const DiskCache cache = require_cache(c);
    Report r;
    r.meta["cache_dir"] = cache.dir().string();
    r.meta["removed"] = cache.clear();
    return r;
}

bool is_validation(ErrorKind k)
{
    switch (k) {
    case ErrorKind::invalid_argument:
    case ErrorKind::invalid_string:
    case ErrorKind::near_critical:
    case ErrorKind::degenerate_anisotropy: return true;
    default: return false;
    }
}

void error_record(std::ostream& err, const std::string& kind, const std::string& message)
{
    ojson e;
    e["error"] = kind;
    e["message"] = message;
    err << e.dump() << "\n";
}

void emit(const Report& report, const RunConfig& c, std::ostream& out)
{
    auto write = [&](std::ostream& os) {
        if (c.format == "csv")
            write_report_csv(os, report);
        else
            write_report_json(os, report);
    };
    if (c.out.empty()) {
        write(out);
        return;
    }
    std::ofstream f(c.out);
    if (!f) fail(ErrorKind::invalid_argument, "cannot open output file '" + c.out + "'");
    write(f);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Thermodynamics, saddle points and long-distance asymptotics of the massless XXZ chain", "xxz"};
    RunConfig c;
    app.set_help_flag("--help", "print this help");
    app.set_config("--config", "", "flat key = value file; command-line flags take precedence");
    app.add_option("--zeta", c.zeta, "anisotropy angle, e.g. 0.5365pi");
    auto* oq = app.add_option("--q", c.q, "Fermi endpoint");
    auto* oh = app.add_option("--h", c.h, "external magnetic field");
    oq->excludes(oh);
    app.add_option("--J", c.J, "exchange coupling")->capture_default_str();
    app.add_option("--v", c.v, "ratio x/t");
    app.add_option("--rmax", c.rmax, "largest string length")->capture_default_str()->check(CLI::Range(1, 64));
    app.add_option("--bound", c.bound, "enumeration bound on |l|, n")->capture_default_str()->check(CLI::Range(0, 16));
    app.add_option("--order", c.order, "Gauss-Legendre order")->capture_default_str()->check(CLI::Range(8, 4096));
    app.add_option("--s-gamma", c.s_gamma, "spin of the operator pair")->capture_default_str()->check(CLI::Range(-4, 4));
    app.add_option("--out", c.out, "output file (default: standard output)");
    app.add_option("--format", c.format, "output format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--cache-dir", c.cache_dir, "cache directory (default: XXZ_CACHE_DIR)");
    app.add_option("--suite", c.suite, "verification suite")->capture_default_str()->check(CLI::IsMember({"quick", "full"}));
    app.add_flag("--verbose", c.verbosity, "verbosity");
    app.require_subcommand(1, 1);

    auto* s_solve = app.add_subcommand("solve", "Fermi endpoint, field, velocities, dressed charge, magnetisation");
    auto* s_strings = app.add_subcommand("strings", "string existence catalogue");
    auto* s_vel = app.add_subcommand("velocities", "v_F, v_inf and per-species threshold velocities");
    auto* s_sad = app.add_subcommand("saddles", "saddle points and structure at velocity v");
    auto* s_exp = app.add_subcommand("exponents", "ranked asymptotic terms (conformal exponents without --v)");
    auto* s_ver = app.add_subcommand("verify", "contour and multiple-integral identity suite");
    auto* s_cache = app.add_subcommand("cache", "inspect or clear the solve cache");
    auto* s_list = s_cache->add_subcommand("list", "list cache entries");
    auto* s_clear = s_cache->add_subcommand("clear", "remove all cache entries");
    s_cache->require_subcommand(1, 1);
    for (auto* s : {s_solve, s_strings, s_vel, s_sad, s_exp, s_ver, s_cache, s_list, s_clear}) s->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        error_record(err, "invalid-argument", e.what());
        return validation_error;
    }

    try {
        Report report;
        bool pass = true;
        if (*s_solve)
            report = cmd_solve(c);
        else if (*s_strings)
            report = cmd_strings(c);
        else if (*s_vel)
            report = cmd_velocities(c);
        else if (*s_sad)
            report = cmd_saddles(c);
        else if (*s_exp)
            report = cmd_exponents(c);
        else if (*s_ver)
            report = cmd_verify(c, pass);
        else if (*s_list)
            report = cmd_cache_list(c);
        else
            report = cmd_cache_clear(c);
        emit(report, c, out);
        if (!pass) {
            error_record(err, "consistency-failure", "at least one identity check failed");
            return numerical_failure;
        }
        return ok;
    } catch (const Error& e) {
        error_record(err, std::string(to_string(e.kind())), e.what());
        return is_validation(e.kind()) ? validation_error : numerical_failure;
    } catch (const std::exception& e) {
        error_record(err, "internal", e.what());
        return numerical_failure;
    }
}

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace xxz::cli
