#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "plurikernel/checks.hpp"
#include "plurikernel/kernels.hpp"

namespace plurikernel::cli {

namespace {

struct Usage : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string domain_path;
    std::optional<int> modes;
    std::optional<double> tol;
    std::optional<int> homotopy_steps;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string format = "json";
    int resolution = 0;
    std::string input;  ///< JSON file with point data; its keys override flags
    std::string warm;
};

struct Points {
    std::map<std::string, std::string> flags;
    Json file;

    CVec get(const std::string& key, int n) const {
        CVec v;
        if (file.is_object() && file.contains(key)) {
            v = cvec_from_json(file.at(key));
        } else {
            auto it = flags.find(key);
            if (it == flags.end() || it->second.empty()) throw Usage("missing --" + key);
            v = parse_flat(key, it->second);
        }
        if (v.size() != n)
            throw Usage("--" + key + ": expected " + std::to_string(2 * n) + " real numbers");
        return v;
    }

    static CVec parse_flat(const std::string& key, const std::string& text) {
        std::vector<double> xs;
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw Usage("--" + key + ": not a number: " + tok);
            }
            if (used != tok.size()) throw Usage("--" + key + ": not a number: " + tok);
            xs.push_back(x);
        }
        if (xs.size() % 2 != 0) throw Usage("--" + key + ": odd number of reals");
        CVec v(static_cast<Eigen::Index>(xs.size() / 2));
        for (std::size_t j = 0; j < xs.size() / 2; ++j) v(static_cast<Eigen::Index>(j)) = cplx(xs[2 * j], xs[2 * j + 1]);
        return v;
    }
};

SolverConfig solver_config(const RunConfig& rc, const Json& defaults) {
    SolverConfig cfg;
    const Json& s = defaults.at("solver");
    cfg.modes = s.value("modes", cfg.modes);
    cfg.newton_tol = s.value("newton_tol", cfg.newton_tol);
    cfg.max_iter = s.value("max_iter", cfg.max_iter);
    cfg.homotopy_steps = s.value("homotopy_steps", cfg.homotopy_steps);
    if (rc.modes) cfg.modes = *rc.modes;
    if (rc.tol) cfg.newton_tol = *rc.tol;
    if (rc.homotopy_steps) cfg.homotopy_steps = *rc.homotopy_steps;
    cfg.seed = rc.seed;
    cfg.validate();
    return cfg;
}

DomainSpec domain_of(const RunConfig& rc) {
    if (rc.domain_path.empty()) throw Usage("missing --domain");
    return load_domain(rc.domain_path);
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Usage("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Usage("malformed JSON in " + path + ": " + e.what());
    }
}

// Envelope shared by every output: version plus the digest of everything that determines the result.
Json envelope(const std::string& command, const Json& config) {
    return {{"version", library_version()}, {"command", command}, {"config_digest", digest(config)}};
}

void csv_preamble(std::ostream& out, const Json& env) {
    out << "# plurikernel " << env.at("version").get<std::string>() << " config "
        << env.at("config_digest").get<std::string>() << '\n';
}

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int domain_validate(const RunConfig& rc) {
        const DomainSpec spec = domain_of(rc);
        const Json cfg{{"domain", to_json(spec)}, {"seed", rc.seed}};
        const ValidationReport v = validate(spec, 1000, rc.seed);
        Json j = envelope("domain validate", cfg);
        j["domain"] = to_json(spec);
        j["validation"] = {{"ok", v.ok},
                           {"min_hessian_eigenvalue", v.min_hessian_eigenvalue},
                           {"max_boundary_residual", v.max_boundary_residual},
                           {"samples", v.samples},
                           {"message", v.message}};
        if (rc.format == "csv") {
            csv_preamble(out_, j);
            out_ << "ok,min_hessian_eigenvalue,max_boundary_residual,samples\n"
                 << (v.ok ? 1 : 0) << ',' << g17(v.min_hessian_eigenvalue) << ','
                 << g17(v.max_boundary_residual) << ',' << v.samples << '\n';
        } else {
            out_ << dump(j) << '\n';
        }
        return v.ok ? ok : check_failed;
    }

    int geodesic(const std::string& kind, const RunConfig& rc, const Points& pts) {
        const DomainSpec spec = domain_of(rc);
        const int n = spec.dimension();
        const Json defaults = load_defaults();
        const SolverConfig cfg = solver_config(rc, defaults);
        std::optional<GeodesicDisc> warm;
        if (!rc.warm.empty()) {
            try {
                const Json wj = load_json_file(rc.warm);
                warm = geodesic_from_json(wj.contains("geodesic") ? wj.at("geodesic") : wj);
            } catch (const std::invalid_argument& e) {
                throw Usage(e.what());
            }
        }
        const GeodesicDisc* w = warm ? &*warm : nullptr;
        GeodesicDisc g;
        Json inputs;
        if (kind == "two-point") {
            const CVec z = pts.get("z", n), x = pts.get("w", n);
            inputs = {{"z", to_json(z)}, {"w", to_json(x)}};
            g = solve_two_point(spec, z, x, cfg, w);
        } else if (kind == "direction") {
            const CVec z = pts.get("z", n), v = pts.get("v", n);
            inputs = {{"z", to_json(z)}, {"v", to_json(v)}};
            g = solve_direction(spec, z, v, cfg, w);
        } else {
            const CVec p = pts.get("p", n), v = pts.get("v", n);
            inputs = {{"p", to_json(p)}, {"v", to_json(v)}};
            g = solve_chl(spec, p, v, cfg, w);
        }
        const Json config{{"domain", to_json(spec)}, {"solver", to_json(cfg)}, {"inputs", inputs},
                          {"warm", warm ? digest(to_json(*warm)) : ""}};
        Json j = envelope("geodesic " + kind, config);
        if (rc.format == "csv") {
            csv_preamble(out_, j);
            out_ << "component,k,re,im\n";
            for (int c = 0; c < n; ++c)
                for (int k = 0; k <= g.phi.degree(); ++k) {
                    const cplx a = g.phi.coeffs()(c, k);
                    out_ << c + 1 << ',' << k << ',' << g17(a.real()) << ',' << g17(a.imag()) << '\n';
                }
        } else {
            j["geodesic"] = to_json(g);
            out_ << dump(j) << '\n';
        }
        if (!g.residuals.converged) {
            err_ << "solver did not converge\n";
            return numerical_failure;
        }
        return ok;
    }

    int kernel(const std::string& kind, const RunConfig& rc, const Points& pts) {
        const DomainSpec spec = domain_of(rc);
        const int n = spec.dimension();
        const SolverConfig cfg = solver_config(rc, load_defaults());
        Json inputs;
        double value = 0.0;
        std::optional<double> reference;
        if (kind == "green") {
            const CVec z0 = pts.get("z0", n), z = pts.get("z", n);
            inputs = {{"z0", to_json(z0)}, {"z", to_json(z)}};
            value = green(spec, z0, z, cfg);
            if (spec.is_quadric()) reference = quadric_green(spec, z0, z);
        } else if (kind == "poisson") {
            const CVec p = pts.get("p", n), z = pts.get("z", n);
            inputs = {{"p", to_json(p)}, {"z", to_json(z)}};
            value = poisson(spec, p, z, cfg);
            if (spec.is_quadric()) reference = quadric_poisson(spec, p, z);
        } else if (kind == "kobayashi") {
            const CVec z = pts.get("z", n), w = pts.get("w", n);
            inputs = {{"z", to_json(z)}, {"w", to_json(w)}};
            value = kobayashi_distance(spec, z, w, cfg);
            if (spec.is_quadric()) reference = quadric_kobayashi_distance(spec, z, w);
        } else {
            const CVec z = pts.get("z", n), v = pts.get("v", n);
            inputs = {{"z", to_json(z)}, {"v", to_json(v)}};
            value = kobayashi_metric(spec, z, v, cfg);
            if (spec.is_quadric()) reference = quadric_kobayashi_metric(spec, z, v);
        }
        if (!std::isfinite(value) && !(kind == "green" && value == -std::numeric_limits<double>::infinity())) {
            err_ << "kernel evaluation failed\n";
            return numerical_failure;
        }
        const Json config{{"domain", to_json(spec)}, {"solver", to_json(cfg)}, {"inputs", inputs}};
        Json j = envelope("kernel " + kind, config);
        j["domain"] = to_json(spec);
        j["inputs"] = inputs;
        j["value"] = value;
        Json diag{{"modes", cfg.modes}, {"newton_tol", cfg.newton_tol}};
        if (reference) {
            diag["closed_form"] = *reference;
            diag["closed_form_error"] = std::abs(value - *reference);
        }
        j["diagnostics"] = diag;
        if (rc.format == "csv") {
            csv_preamble(out_, j);
            out_ << "kernel,value\n" << kind << ',' << g17(value) << '\n';
        } else {
            out_ << dump(j) << '\n';
        }
        return ok;
    }

    int levelset_cmd(const RunConfig& rc, const Points& pts, double radius, int count) {
        const DomainSpec spec = domain_of(rc);
        const int n = spec.dimension();
        if (!(radius > 0.0)) throw Usage("--radius must be > 0");
        if (count < 0) throw Usage("--count must be >= 0");
        const SolverConfig cfg = solver_config(rc, load_defaults());
        const CVec p = pts.get("p", n);
        LevelSetSample ls;
        if (count > 0) ls = levelset(spec, p, radius, count, rc.seed, cfg);
        const Json config{{"domain", to_json(spec)},   {"solver", to_json(cfg)}, {"p", to_json(p)},
                          {"radius", radius},          {"count", count}};
        Json j = envelope("levelset", config);
        if (rc.format == "json") {
            j["points"] = Json::array();
            for (std::size_t k = 0; k < ls.points.size(); ++k)
                j["points"].push_back({{"z", to_json(ls.points[k])}, {"residual", ls.residuals[k]}});
            j["skipped"] = ls.skipped;
            out_ << dump(j) << '\n';
            return ok;
        }
        csv_preamble(out_, j);
        out_ << "# skipped " << ls.skipped << '\n';
        for (int c = 1; c <= n; ++c) out_ << "re_z" << c << ",im_z" << c << ',';
        out_ << "residual\n";
        for (std::size_t k = 0; k < ls.points.size(); ++k) {
            for (int c = 0; c < n; ++c) out_ << g17(ls.points[k](c).real()) << ',' << g17(ls.points[k](c).imag()) << ',';
            out_ << g17(ls.residuals[k]) << '\n';
        }
        return ok;
    }

    int check(const std::string& suite, const RunConfig& rc) {
        const DomainSpec spec = domain_of(rc);
        CheckOptions opts;
        opts.defaults = load_defaults();
        opts.modes = rc.modes;
        opts.tol = rc.tol;
        opts.homotopy_steps = rc.homotopy_steps;
        opts.seed = rc.seed;
        opts.workers = rc.workers;
        opts.resolution = rc.resolution;
        const SuiteReport rep = run_suite(suite, spec, opts);
        const Json config{{"domain", to_json(spec)},
                          {"suite", suite},
                          {"solver", to_json(opts.solver(suite))},
                          {"resolution", rc.resolution},
                          {"defaults", opts.defaults}};
        Json j = envelope("check " + suite, config);
        const Json body = to_json(rep);
        for (const auto& [k, v] : body.items()) j[k] = v;
        if (rc.format == "csv") {
            csv_preamble(out_, j);
            out_ << "name,pass,measured,relation,tolerance,samples\n";
            for (const auto& c : rep.items)
                out_ << c.name << ',' << (c.pass ? 1 : 0) << ',' << g17(c.measured) << ',' << c.relation << ','
                     << g17(c.tolerance) << ',' << c.samples << '\n';
        } else {
            out_ << dump(j) << '\n';
        }
        for (const auto& c : rep.items)
            if (c.name == "numerical_failure") {
                err_ << c.detail << '\n';
                return numerical_failure;
            }
        return rep.pass() ? ok : check_failed;
    }

private:
    std::ostream& out_;
    std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Complex geodesics, pluricomplex Green and Poisson kernels on convex domains", "plurikernel"};
    app.require_subcommand(1);
    RunConfig rc;
    Points pts;
    double radius = 1.0;
    int count = 60;
    std::string suite;

    auto globals = [&](CLI::App* a) {
        a->add_option("--domain", rc.domain_path, "domain JSON file");
        a->add_option("--modes", rc.modes, "Fourier modes of the solver")->check(CLI::PositiveNumber);
        a->add_option("--tol", rc.tol, "Newton tolerance")->check(CLI::PositiveNumber);
        a->add_option("--homotopy-steps", rc.homotopy_steps, "continuation steps");
        a->add_option("--seed", rc.seed, "sampling seed");
        a->add_option("--workers", rc.workers, "worker threads")->check(CLI::PositiveNumber);
        a->add_option("--format", rc.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    };
    auto point = [&](CLI::App* a, const std::string& key, const std::string& help) {
        a->add_option("--" + key, pts.flags[key], help + " as Re,Im,Re,Im,...");
    };
    auto input = [&](CLI::App* a) { a->add_option("--input", rc.input, "JSON file of points; overrides flags"); };

    std::function<int()> action;

    auto* dom = app.add_subcommand("domain", "domain commands")->require_subcommand(1);
    auto* validate_cmd = dom->add_subcommand("validate", "check strong convexity on sampled boundary points");
    globals(validate_cmd);
    validate_cmd->callback([&] { action = [&] { return Runner(out, err).domain_validate(rc); }; });

    auto* geo = app.add_subcommand("geodesic", "solve for a complex geodesic")->require_subcommand(1);
    for (const std::string kind : {"two-point", "direction", "chl"}) {
        auto* sub = geo->add_subcommand(kind);
        globals(sub);
        input(sub);
        sub->add_option("--warm", rc.warm, "previous geodesic JSON used as a warm start");
        if (kind == "two-point") {
            point(sub, "z", "first point");
            point(sub, "w", "second point");
        } else if (kind == "direction") {
            point(sub, "z", "base point");
            point(sub, "v", "tangent vector");
        } else {
            point(sub, "p", "boundary point");
            point(sub, "v", "direction with <v, nu_p> > 0");
        }
        sub->callback([&, kind] { action = [&, kind] { return Runner(out, err).geodesic(kind, rc, pts); }; });
    }

    auto* ker = app.add_subcommand("kernel", "evaluate a kernel")->require_subcommand(1);
    for (const std::string kind : {"green", "poisson", "kobayashi", "metric"}) {
        auto* sub = ker->add_subcommand(kind);
        globals(sub);
        input(sub);
        if (kind == "green") {
            point(sub, "z0", "pole");
            point(sub, "z", "point");
        } else if (kind == "poisson") {
            point(sub, "p", "boundary pole");
            point(sub, "z", "point");
        } else if (kind == "kobayashi") {
            point(sub, "z", "first point");
            point(sub, "w", "second point");
        } else {
            point(sub, "z", "base point");
            point(sub, "v", "tangent vector");
        }
        sub->callback([&, kind] { action = [&, kind] { return Runner(out, err).kernel(kind, rc, pts); }; });
    }

    auto* lvl = app.add_subcommand("levelset", "sample a horosphere boundary {Omega = -1/R}");
    globals(lvl);
    input(lvl);
    point(lvl, "p", "boundary pole");
    lvl->add_option("--radius", radius, "horosphere radius R");
    lvl->add_option("--count", count, "number of rays");
    lvl->callback([&] { action = [&] { return Runner(out, err).levelset_cmd(rc, pts, radius, count); }; });

    auto* chk = app.add_subcommand("check", "run a check suite");
    globals(chk);
    chk->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
    chk->add_option("--resolution", rc.resolution, "quadrature resolution for the reproduce suite")
        ->check(CLI::NonNegativeNumber);
    chk->callback([&] { action = [&] { return Runner(out, err).check(suite, rc); }; });

    std::vector<std::string> argv_store{"plurikernel"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << "usage: plurikernel --help\n";
        return usage_error;
    }

    try {
        if (!rc.input.empty()) pts.file = load_json_file(rc.input);
        if (!action) throw Usage("no command");
        return action();
    } catch (const Usage& e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        if (!e.diagnostic().empty()) err << e.diagnostic() << '\n';
        return numerical_failure;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const Json::exception& e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }
}

}  // namespace plurikernel::cli
