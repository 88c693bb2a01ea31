#include "plurikernel/checks.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <random>
#include <thread>

#include "plurikernel/kernels.hpp"
#include "plurikernel/leftinv.hpp"
#include "plurikernel/measure.hpp"

namespace plurikernel {

extern const char* const kBundledDefaults;

Json bundled_defaults() { return Json::parse(kBundledDefaults); }

Json load_defaults() {
    const char* path = std::getenv("PLURIKERNEL_DEFAULTS");
    if (!path || !*path) return bundled_defaults();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(std::string("cannot open defaults file ") + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed defaults file: ") + e.what());
    }
}

SolverConfig CheckOptions::solver(const std::string& suite) const {
    SolverConfig cfg;
    auto apply = [&](const Json& block) {
        if (block.contains("modes")) cfg.modes = block.at("modes").get<int>();
        if (block.contains("newton_tol")) cfg.newton_tol = block.at("newton_tol").get<double>();
        if (block.contains("max_iter")) cfg.max_iter = block.at("max_iter").get<int>();
        if (block.contains("homotopy_steps")) cfg.homotopy_steps = block.at("homotopy_steps").get<int>();
    };
    if (defaults.contains("solver")) apply(defaults.at("solver"));
    if (defaults.contains(suite)) apply(defaults.at(suite));
    if (modes) cfg.modes = *modes;
    if (tol) cfg.newton_tol = *tol;
    if (homotopy_steps) cfg.homotopy_steps = *homotopy_steps;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

bool SuiteReport::pass() const {
    return !items.empty() && std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"oracle", "gvp",       "asymptotics", "extremal",
                                                "ma",     "convexity", "reproduce",   "projection"};
    return names;
}

namespace {

using Rng = std::mt19937_64;

struct Ctx {
    const DomainSpec& spec;
    const CheckOptions& opts;
    const Json& tol;  // the suite block
    SolverConfig cfg;

    double num(const char* key) const {
        if (!tol.contains(key)) throw std::invalid_argument(std::string("defaults lack ") + key);
        return tol.at(key).get<double>();
    }
    int count(const char* key) const {
        if (!tol.contains(key)) throw std::invalid_argument(std::string("defaults lack ") + key);
        return tol.at(key).get<int>();
    }
};

CVec gaussian(int n, Rng& rng) {
    std::normal_distribution<double> g;
    CVec d(n);
    for (int j = 0; j < n; ++j) {
        const double re = g(rng);
        const double im = g(rng);
        d(j) = cplx(re, im);
    }
    return d;
}

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

CVec random_interior(const DomainSpec& spec, Rng& rng, double shrink) {
    const CVec d = gaussian(spec.dimension(), rng);
    const double r = std::pow(uniform(rng), 1.0 / (2.0 * spec.dimension()));
    return shrink * r * boundary_along_ray(spec, d);
}

CVec random_boundary(const DomainSpec& spec, Rng& rng) {
    return boundary_along_ray(spec, gaussian(spec.dimension(), rng));
}

CVec complex_tangent(const CVec& nu, Rng& rng) {
    CVec t = gaussian(static_cast<int>(nu.size()), rng);
    t -= hermitian(t, nu) * nu;
    const double len = t.norm();
    return len > 0.0 ? CVec(t / len) : t;
}

// Unit v with <v, nu> real positive.
CVec random_lp(const DomainSpec& spec, const CVec& p, Rng& rng, double max_spread = 1.5) {
    const CVec nu = unit_normal(spec, p);
    const double spread = max_spread * uniform(rng);
    return (nu + spread * complex_tangent(nu, rng)).normalized();
}

cplx random_disc_point(Rng& rng, double radius) {
    const double r = radius * std::sqrt(uniform(rng));
    return std::polar(r, 2.0 * kPi * uniform(rng));
}

template <class T>
std::vector<T> parallel_map(int count, int workers, const std::function<T(int)>& fn) {
    std::vector<T> out(static_cast<std::size_t>(std::max(count, 0)));
    const int w = std::max(1, std::min(workers, count));
    if (w <= 1) {
        for (int i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> pool;
    for (int k = 0; k < w; ++k)
        pool.emplace_back([&, k] {
            try {
                for (int i = k; i < count; i += w) out[i] = fn(i);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

CheckItem item(std::string name, double measured, double tolerance, const std::string& rel, int samples) {
    CheckItem c;
    c.name = std::move(name);
    c.measured = measured;
    c.tolerance = tolerance;
    c.relation = rel;
    c.samples = samples;
    if (rel == "<=")
        c.pass = measured <= tolerance;
    else if (rel == ">=")
        c.pass = measured >= tolerance;
    else
        c.pass = measured > tolerance;
    return c;
}

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

double min_of(const std::vector<double>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : v) m = std::min(m, x);
    return m;
}

template <class A, class B>
double boundary_gap(const A& a, const B& b) {
    double e = 0.0;
    for (int k = 0; k < 256; ++k) {
        const cplx zeta = std::polar(1.0, 2.0 * kPi * k / 256.0);
        e = std::max(e, (a(zeta) - b(zeta)).norm());
    }
    return e;
}

RVec inverse_sqrt_axes(const DomainSpec& spec) {
    RVec d(spec.dimension());
    for (int j = 0; j < spec.dimension(); ++j) d(j) = 1.0 / std::sqrt(spec.axes()[j]);
    return d;
}

MoebiusDisc closed_chl(const DomainSpec& spec, const CVec& p, const CVec& v) {
    const MoebiusDisc d =
        ball_chl_disc(to_ball(spec, p).normalized(), to_ball(spec, v).normalized()).scaled(inverse_sqrt_axes(spec));
    return d.compose(chl_reparametrization(d.derivative(1.0, 1), d.derivative(1.0, 2), unit_normal(spec, p)));
}

double poincare(cplx a, cplx b) { return std::atanh(std::abs(a - b) / std::abs(1.0 - std::conj(a) * b)); }

double normalization_defect(const GeodesicDisc& g, Rng& rng, int samples) {
    double e = 0.0;
    for (int k = 0; k < samples; ++k) {
        const cplx zeta = random_disc_point(rng, 0.95);
        e = std::max(e, std::abs(bilinear(g.phi_tilde.eval(zeta), g.phi.eval(zeta, 1)) - 1.0));
    }
    return e;
}

double stationarity_defect(const GeodesicDisc& g) {
    return std::max({g.residuals.boundary_defect, g.residuals.dual_defect, g.residuals.norm_defect});
}

// ---------------------------------------------------------------- oracle

std::vector<CheckItem> oracle_suite(const Ctx& c) {
    const DomainSpec& spec = c.spec;
    const int n = spec.dimension();
    const int inst = c.count("instances");
    const int samples = c.count("samples");
    const bool quad = spec.is_quadric();
    Rng rng(c.opts.seed);

    struct Draw {
        CVec z, w, v, p, lv, u;
        cplx z1, z2;
        double lambda;
    };
    std::vector<Draw> draws(inst);
    for (auto& d : draws) {
        d.z = random_interior(spec, rng, 0.6);
        d.w = random_interior(spec, rng, 0.6);
        d.u = random_interior(spec, rng, 0.6);
        d.v = gaussian(n, rng);
        d.p = random_boundary(spec, rng);
        d.lv = random_lp(spec, d.p, rng, 1.0);
        d.z1 = random_disc_point(rng, 0.9);
        d.z2 = random_disc_point(rng, 0.9);
        d.lambda = 0.5 + 2.5 * uniform(rng);
    }

    struct Result {
        double gap_two = 0, gap_dir = 0, gap_chl = 0, defect = 0, mu = 0, norm = 0;
        double isometry = 0, homogeneity = 0, closed_form = 0;
    };
    const double pert = c.num("perturbation");
    const auto results = parallel_map<Result>(inst, c.opts.workers, [&](int i) {
        const Draw& d = draws[i];
        SolverConfig cfg = c.cfg;
        cfg.initial_perturbation = pert;
        cfg.seed = c.opts.seed + static_cast<std::uint64_t>(i);
        Result r;
        auto labelled = [i](const char* kind, auto solve) {
            try {
                return solve();
            } catch (const NumericalError& e) {
                throw NumericalError(std::string(kind) + " instance " + std::to_string(i) + ": " + e.what(),
                                     e.diagnostic());
            }
        };
        const auto two = labelled("two-point", [&] { return solve_two_point(spec, d.z, d.w, cfg); });
        const auto dir = labelled("direction", [&] { return solve_direction(spec, d.z, d.v, cfg); });
        const auto chl = labelled("chl", [&] { return solve_chl(spec, d.p, d.lv, cfg); });
        if (quad) {
            double t = 0.0;
            const auto inv = inverse_sqrt_axes(spec);
            const MoebiusDisc m2 = ball_two_point_disc(to_ball(spec, d.z), to_ball(spec, d.w), &t).scaled(inv);
            r.gap_two = std::max(boundary_gap(two, m2), std::abs(std::get<TwoPointParams>(two.meta).t - t));
            const MoebiusDisc md = ball_direction_disc(to_ball(spec, d.z), to_ball(spec, d.v), &t).scaled(inv);
            r.gap_dir = std::max(boundary_gap(dir, md), std::abs(std::get<DirectionParams>(dir.meta).t - t));
            r.gap_chl = boundary_gap(chl, closed_chl(spec, d.p, d.lv));
        }
        Rng local(c.opts.seed * 7919 + static_cast<std::uint64_t>(i));
        r.defect = std::max({stationarity_defect(two), stationarity_defect(dir), stationarity_defect(chl)});
        r.mu = std::min({two.residuals.mu_min, dir.residuals.mu_min, chl.residuals.mu_min});
        r.norm = std::max({normalization_defect(two, local, samples), normalization_defect(dir, local, samples),
                           normalization_defect(chl, local, samples)});

        const double k = kobayashi_distance(spec, two(d.z1), two(d.z2), c.cfg);
        r.isometry = std::abs(k - poincare(d.z1, d.z2));
        const double m1 = kobayashi_metric(spec, d.z, d.v, c.cfg);
        const double ml = kobayashi_metric(spec, d.z, CVec(d.lambda * d.v), c.cfg);
        r.homogeneity = std::abs(ml - d.lambda * m1) / (d.lambda * m1);
        if (spec.kind() == DomainKind::ball) {
            const CVec zero = CVec::Zero(n);
            r.closed_form = std::max(std::abs(kobayashi_distance(spec, zero, d.w, c.cfg) - std::atanh(d.w.norm())),
                                     std::abs(kobayashi_metric(spec, zero, d.v, c.cfg) - d.v.norm()) / d.v.norm());
        } else if (quad) {
            const double kd = quadric_kobayashi_distance(spec, d.z, d.w);
            const double km = quadric_kobayashi_metric(spec, d.z, d.v);
            r.closed_form = std::max(std::abs(kobayashi_distance(spec, d.z, d.w, c.cfg) - kd) / std::max(1.0, kd),
                                     std::abs(m1 - km) / km);
        }
        return r;
    });

    std::vector<CheckItem> out;
    auto collect = [&](auto field) {
        std::vector<double> v;
        for (const auto& r : results) v.push_back(field(r));
        return v;
    };
    if (quad) {
        out.push_back(item("two_point_vs_closed_form", max_of(collect([](const Result& r) { return r.gap_two; })),
                           c.num("geodesic_sup"), "<=", inst));
        out.push_back(item("direction_vs_closed_form", max_of(collect([](const Result& r) { return r.gap_dir; })),
                           c.num("geodesic_sup"), "<=", inst));
        out.push_back(item("chl_vs_closed_form", max_of(collect([](const Result& r) { return r.gap_chl; })),
                           c.num("geodesic_sup"), "<=", inst));
    }
    out.push_back(item("stationarity_defects", max_of(collect([](const Result& r) { return r.defect; })),
                       c.num("defect"), "<=", 3 * inst));
    out.push_back(item("mu_min", min_of(collect([](const Result& r) { return r.mu; })), 0.0, ">", 3 * inst));
    out.push_back(item("dual_normalization", max_of(collect([](const Result& r) { return r.norm; })),
                       c.num("normalization"), "<=", 3 * inst * samples));
    out.push_back(item("isometry", max_of(collect([](const Result& r) { return r.isometry; })), c.num("isometry"),
                       "<=", inst));
    out.push_back(item("metric_homogeneity", max_of(collect([](const Result& r) { return r.homogeneity; })),
                       c.num("homogeneity"), "<=", inst));
    if (quad)
        out.push_back(item("closed_form_kernels", max_of(collect([](const Result& r) { return r.closed_form; })),
                           c.num("closed_form"), "<=", 2 * inst));

    // symmetry and triangle inequality
    const int pairs = c.count("pairs");
    std::vector<std::array<CVec, 3>> pts(pairs);
    for (auto& t : pts)
        for (auto& z : t) z = random_interior(spec, rng, 0.6);
    struct Pair {
        double sym = 0, tri = 0;
    };
    const auto pr = parallel_map<Pair>(pairs, c.opts.workers, [&](int i) {
        const auto& [z, w, u] = pts[i];
        const double zw = kobayashi_distance(spec, z, w, c.cfg);
        Pair p;
        p.sym = std::abs(zw - kobayashi_distance(spec, w, z, c.cfg));
        p.tri = zw - kobayashi_distance(spec, z, u, c.cfg) - kobayashi_distance(spec, u, w, c.cfg);
        return p;
    });
    std::vector<double> sym, tri;
    for (const auto& p : pr) {
        sym.push_back(p.sym);
        tri.push_back(p.tri);
    }
    out.push_back(item("symmetry", max_of(sym), c.num("symmetry"), "<=", pairs));
    out.push_back(item("triangle_inequality", *std::max_element(tri.begin(), tri.end()), c.num("triangle"), "<=",
                       pairs));
    return out;
}

// ---------------------------------------------------------------- gvp

std::vector<CheckItem> gvp_suite(const Ctx& c) {
    const DomainSpec& spec = c.spec;
    const int inst = c.count("instances");
    const std::vector<double> steps = c.tol.at("steps").get<std::vector<double>>();
    Rng rng(c.opts.seed + 11);
    std::vector<std::pair<CVec, CVec>> draws;
    for (int i = 0; i < inst; ++i) {
        CVec z0 = random_interior(spec, rng, 0.6);
        CVec p = random_boundary(spec, rng);
        draws.emplace_back(std::move(z0), std::move(p));
    }
    const bool ball = spec.kind() == DomainKind::ball;
    const auto errs = parallel_map<double>(inst, c.opts.workers, [&](int i) {
        const auto& [z0, p] = draws[i];
        if (ball) {
            const ScalarField omega = [p = p](const CVec& z) { return ball_poisson(p, z); };
            const ScalarField green_fn = [z0 = z0](const CVec& z) { return ball_green(z0, z); };
            return gvp_check(omega, green_fn, z0, p, unit_normal(spec, p), steps).error;
        }
        return gvp_check(spec, z0, p, steps, c.cfg).error;
    });
    return {item(ball ? "gvp_identity_closed_form" : "gvp_identity", max_of(errs),
                 c.num(ball ? "ball_tol" : "tol"), "<=", inst)};
}

// ---------------------------------------------------------------- asymptotics

std::vector<CheckItem> asymptotics_suite(const Ctx& c) {
    const DomainSpec& spec = c.spec;
    const std::vector<double> ts = c.tol.at("t_values").get<std::vector<double>>();
    Rng rng(c.opts.seed + 23);
    struct Curve {
        CVec p, d;
        double bend;
        bool tangential;
    };
    std::vector<Curve> curves;
    for (int k = 0; k < 6; ++k) {
        const CVec p = random_boundary(spec, rng);
        const CVec nu = unit_normal(spec, p);
        const CVec tau = complex_tangent(nu, rng);
        const cplx i(0.0, 1.0);
        switch (k) {
            case 0: curves.push_back({p, nu, 0.0, false}); break;
            case 1: curves.push_back({p, CVec(nu + 0.5 * tau), -1.0, false}); break;
            case 2: curves.push_back({p, CVec((1.0 + 0.5 * i) * nu), -1.0, false}); break;
            case 3: curves.push_back({p, CVec(2.0 * nu + tau), -1.0, false}); break;
            case 4: curves.push_back({p, CVec(i * nu), -1.0, true}); break;
            default: curves.push_back({p, CVec(i * nu + 0.5 * tau), -1.0, true}); break;
        }
    }
    const auto reps = parallel_map<BoundaryLimitReport>(6, c.opts.workers, [&](int k) {
        const Curve& cv = curves[k];
        return boundary_limit(spec, cv.p, boundary_curve(spec, cv.p, cv.d, cv.bend), ts, c.cfg);
    });
    std::vector<double> rel, tang;
    for (int k = 0; k < 6; ++k) {
        if (curves[k].tangential)
            tang.push_back(std::abs(reps[k].limit));
        else
            rel.push_back(std::abs(reps[k].limit - reps[k].target) / std::abs(reps[k].target));
    }
    return {item("normal_ray_limit", rel[0], c.num("rel_tol"), "<=", 1),
            item("transversal_limits", max_of(rel), c.num("rel_tol"), "<=", static_cast<int>(rel.size())),
            item("tangential_limits", max_of(tang), c.num("tangential_tol"), "<=", static_cast<int>(tang.size()))};
}

// ---------------------------------------------------------------- extremal

std::vector<CheckItem> extremal_suite(const Ctx& c) {
    const DomainSpec& spec = c.spec;
    const int inst = c.count("instances");
    Rng rng(c.opts.seed + 37);
    struct Draw {
        CVec p, v, z;
        cplx zeta;
    };
    std::vector<Draw> draws(inst);
    for (auto& d : draws) {
        d.p = random_boundary(spec, rng);
        d.v = random_lp(spec, d.p, rng);
        d.z = random_interior(spec, rng, 0.9);
        d.zeta = random_disc_point(rng, 0.9);
    }
    struct Result {
        double excess, gap;
    };
    const auto res = parallel_map<Result>(inst, c.opts.workers, [&](int i) {
        const Draw& d = draws[i];
        const auto g = solve_chl(spec, d.p, d.v, c.cfg);
        Result r;
        r.excess = extremal_member(g, d.z) - poisson(spec, d.p, d.z, c.cfg);
        const CVec on = g(d.zeta);
        r.gap = std::abs(extremal_member(g, on) - poisson(spec, d.p, on, c.cfg));
        return r;
    });
    std::vector<double> ex, gap;
    for (const auto& r : res) {
        ex.push_back(r.excess);
        gap.push_back(r.gap);
    }
    return {item("extremal_below_poisson", *std::max_element(ex.begin(), ex.end()), c.num("tol"), "<=", inst),
            item("equality_on_geodesic", max_of(gap), c.num("equality"), "<=", inst)};
}

// ---------------------------------------------------------------- ma

std::vector<CheckItem> ma_suite(const Ctx& c) {
    const DomainSpec& spec = c.spec;
    const int pts = c.count("points");
    const double h = c.num("h");
    Rng rng(c.opts.seed + 41);
    struct Draw {
        CVec z, z0, p;
    };
    std::vector<Draw> draws(pts);
    for (auto& d : draws) {
        d.z = random_interior(spec, rng, 0.8);
        do {
            d.z0 = random_interior(spec, rng, 0.6);
        } while ((d.z0 - d.z).norm() < 0.1);
        do {
            d.p = random_boundary(spec, rng);
        } while ((d.p - d.z).norm() < 0.1);
    }
    struct Result {
        HessianReport green, poisson;
    };
    const auto res = parallel_map<Result>(pts, c.opts.workers, [&](int i) {
        const Draw& d = draws[i];
        return Result{ma_check_green(spec, d.z0, d.z, h, c.cfg), ma_check_poisson(spec, d.p, d.z, h, c.cfg)};
    });
    std::vector<double> gd, ge, pd, pe;
    for (const auto& r : res) {
        gd.push_back(r.green.degeneracy_ratio);
        ge.push_back(r.green.min_eigenvalue);
        pd.push_back(r.poisson.degeneracy_ratio);
        pe.push_back(r.poisson.min_eigenvalue);
    }
    const double psh = -c.num("psh");
    return {item("green_degeneracy", max_of(gd), c.num("degeneracy"), "<=", pts),
            item("green_psh", min_of(ge), psh, ">=", pts),
            item("poisson_degeneracy", max_of(pd), c.num("degeneracy"), "<=", pts),
            item("poisson_psh", min_of(pe), psh, ">=", pts)};
}

// ---------------------------------------------------------------- convexity

std::vector<CheckItem> convexity_suite(const Ctx& c) {
    const DomainSpec& spec = c.spec;
    const int want = c.count("points");
    const int rays = c.count("rays");
    const double radius = c.num("radius");
    const double h = c.num("h");
    const double guard = c.num("pole_distance");
    Rng rng(c.opts.seed + 53);
    const CVec p = random_boundary(spec, rng);
    const LevelSetSample ls = levelset(spec, p, radius, rays, c.opts.seed + 59, c.cfg);
    std::vector<CVec> pts;
    double resid = 0.0;
    for (std::size_t k = 0; k < ls.points.size() && static_cast<int>(pts.size()) < want; ++k) {
        if ((ls.points[k] - p).norm() < guard) continue;
        pts.push_back(ls.points[k]);
        resid = std::max(resid, ls.residuals[k]);
    }
    const int found = static_cast<int>(pts.size());
    const auto mins = parallel_map<double>(found, c.opts.workers, [&](int i) {
        return horosphere_convexity_check(spec, p, pts[i], h, c.cfg);
    });
    const Json& lvl = c.opts.defaults.at("levelset");
    return {item("level_set_points", found, want, ">=", rays),
            item("level_set_residual", resid, lvl.at("residual").get<double>(), "<=", found),
            item("restricted_hessian_min", found ? min_of(mins) : 0.0, 0.0, ">", found)};
}

// ---------------------------------------------------------------- reproduce

std::vector<CheckItem> reproduce_suite(const Ctx& c) {
    const DomainSpec& spec = c.spec;
    const int n = spec.dimension();
    const bool ball = spec.kind() == DomainKind::ball;
    int res = c.opts.resolution;
    if (res <= 0) res = c.count(ball ? "ball_resolution" : "resolution");
    const double tol = c.num(ball ? "ball_tol" : "tol");
    const QuadratureGrid grid = build_grid(spec, res);
    const NormalizationConstant kappa = calibrate_kappa(n);
    MeasureOptions mo;
    mo.source = ball ? KernelSource::closed_form : KernelSource::solved;
    mo.solver = c.cfg;
    mo.workers = c.opts.workers;

    std::vector<std::pair<std::string, PluriharmonicFunction>> fs;
    fs.emplace_back("constant", PluriharmonicFunction::constant_function(1.0));
    std::vector<int> e1(n, 0);
    e1[0] = 1;
    fs.emplace_back("re_z1", PluriharmonicFunction{{{1.0, e1}}, 0.0});
    if (n >= 2) {
        std::vector<int> m12(n, 0), m11(n, 0);
        m12[0] = m12[1] = 1;
        m11[0] = 2;
        fs.emplace_back("quadratic", PluriharmonicFunction{{{1.0, m12}, {1.0, m11}}, 2.0});
    } else {
        fs.emplace_back("quadratic", PluriharmonicFunction{{{1.0, {2}}}, 2.0});
    }

    Rng rng(c.opts.seed + 67);
    const int pts = c.count("points");
    std::vector<double> worst(fs.size(), 0.0);
    int skipped = 0;
    for (int i = 0; i < pts; ++i) {
        const CVec z = random_interior(spec, rng, 0.6);
        const KernelSamples s = sample_kernel(grid, z, mo);
        skipped += s.skipped_count;
        for (std::size_t k = 0; k < fs.size(); ++k)
            worst[k] = std::max(worst[k], reproduce_pluriharmonic(fs[k].second, grid, s, kappa).error);
    }
    std::vector<CheckItem> out;
    out.push_back(item("kappa_drift", kappa.drift, 1e-6, "<=", 1));
    for (std::size_t k = 0; k < fs.size(); ++k) {
        out.push_back(item("reproduce_" + fs[k].first, worst[k], tol, "<=", pts));
        out.back().detail = "resolution=" + std::to_string(res) + " nodes=" + std::to_string(grid.nodes.size()) +
                            " skipped=" + std::to_string(skipped);
    }
    return out;
}

// ---------------------------------------------------------------- projection

std::vector<CheckItem> projection_suite(const Ctx& c) {
    const DomainSpec& spec = c.spec;
    const int n = spec.dimension();
    const int samples = c.count("samples");
    const int pts = c.count("points");
    Rng rng(c.opts.seed + 71);
    std::vector<CheckItem> out;

    const CVec z = random_interior(spec, rng, 0.7), w = random_interior(spec, rng, 0.7);
    const auto two = solve_two_point(spec, z, w, c.cfg);
    double ident = 0.0;
    for (int k = 0; k < samples; ++k) {
        const cplx zeta = random_disc_point(rng, 0.98);
        ident = std::max(ident, std::abs(left_inverse(two, two(zeta)) - zeta));
    }
    out.push_back(item("left_inverse_identity", ident, c.num("identity"), "<=", samples));

    const auto dir = solve_direction(spec, random_interior(spec, rng, 0.5), gaussian(n, rng), c.cfg);
    double idem = 0.0;
    for (int k = 0; k < pts; ++k) {
        const CVec x = random_interior(spec, rng, 0.95);
        const CVec r = lempert_projection(dir, x);
        idem = std::max(idem, (lempert_projection(dir, r) - r).norm());
    }
    out.push_back(item("projection_idempotent", idem, c.num("idempotence"), "<=", pts));

    const double hs = c.num("fd_step");
    double grad = 0.0;
    for (int k = 0; k < samples; ++k) {
        const CVec x = random_interior(spec, rng, 0.9);
        const CVec g = left_inverse_gradient(two, x);
        for (int j = 0; j < n; ++j) {
            CVec ep = x, em = x;
            ep(j) += hs;
            em(j) -= hs;
            const cplx fd = (left_inverse(two, ep) - left_inverse(two, em)) / (2.0 * hs);
            grad = std::max(grad, std::abs(fd - g(j)) / std::max(1.0, std::abs(g(j))));
        }
    }
    out.push_back(item("gradient_vs_fd", grad, c.num("gradient"), "<=", samples));

    const CVec p = random_boundary(spec, rng);
    const auto chl = solve_chl(spec, p, random_lp(spec, p, rng), c.cfg);
    std::vector<CVec> xs(pts);
    for (auto& x : xs) x = random_interior(spec, rng, 0.9);
    const auto excess = parallel_map<double>(pts, c.opts.workers, [&](int k) {
        const CVec r = lempert_projection(chl, xs[k]);
        return poisson(spec, p, r, c.cfg) - poisson(spec, p, xs[k], c.cfg);
    });
    out.push_back(item("poisson_monotone", *std::max_element(excess.begin(), excess.end()), c.num("monotonicity"),
                       "<=", pts));

    if (n == 2) {
        const double eps = c.num("retraction_eps");
        const ExampleRetraction ret(2, eps, [](const CVec&, int j, int k) { return cplx(j == 2 && k == 2 ? 1.0 : 0.0); });
        const DomainSpec ball = DomainSpec::ball(2);
        double ridem = 0.0;
        for (int k = 0; k < pts; ++k) {
            const CVec x = random_interior(ball, rng, 0.95);
            ridem = std::max(ridem, (ret(ret(x)) - ret(x)).norm());
        }
        out.push_back(item("retraction_idempotent", ridem, c.num("retraction"), "<=", pts));
        CVec e1 = CVec::Zero(2), half = CVec::Zero(2), offset = CVec::Zero(2);
        e1(0) = 1.0;
        half(1) = 0.5;
        offset(0) = eps * 0.25;
        const auto line = ball_geodesic_direction(ball, CVec::Zero(2), e1);
        const double off = (ret(half) - lempert_projection(line, half) - offset).norm();
        out.push_back(item("retraction_offset", off, c.num("retraction"), "<=", 1));
    }
    return out;
}

}  // namespace

SuiteReport run_suite(const std::string& suite, const DomainSpec& spec, const CheckOptions& opts) {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw std::invalid_argument("unknown suite " + suite);
    if (!opts.defaults.contains(suite)) throw std::invalid_argument("defaults lack suite " + suite);
    if (opts.workers < 1) throw std::invalid_argument("workers must be >= 1");
    const Ctx ctx{spec, opts, opts.defaults.at(suite), opts.solver(suite)};
    SuiteReport rep{suite, spec, {}};
    using Fn = std::vector<CheckItem> (*)(const Ctx&);
    static const std::vector<std::pair<std::string, Fn>> table{
        {"oracle", oracle_suite},       {"gvp", gvp_suite},           {"asymptotics", asymptotics_suite},
        {"extremal", extremal_suite},   {"ma", ma_suite},             {"convexity", convexity_suite},
        {"reproduce", reproduce_suite}, {"projection", projection_suite}};
    for (const auto& [name, fn] : table)
        if (name == suite) {
            try {
                rep.items = fn(ctx);
            } catch (const NumericalError& e) {
                CheckItem failed;
                failed.name = "numerical_failure";
                failed.detail = std::string(e.what()) + (e.diagnostic().empty() ? "" : ": " + e.diagnostic());
                rep.items.push_back(failed);
            }
        }
    return rep;
}

Json to_json(const SuiteReport& r) {
    Json items = Json::array();
    for (const auto& c : r.items) {
        Json j{{"name", c.name},
               {"pass", c.pass},
               {"measured", c.measured},
               {"relation", c.relation},
               {"tolerance", c.tolerance},
               {"samples", c.samples}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        items.push_back(std::move(j));
    }
    return {{"suite", r.suite}, {"domain", to_json(r.domain)}, {"pass", r.pass()}, {"items", items}};
}

}  // namespace plurikernel
