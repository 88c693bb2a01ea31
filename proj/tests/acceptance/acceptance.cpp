// Acceptance run: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "plurikernel/checks.hpp"

using namespace plurikernel;

namespace {

using Clock = std::chrono::steady_clock;

struct Timed {
    SuiteReport report;
    double seconds = 0.0;
};

struct Line {
    bool pass = true;
    std::string text;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!text.empty()) text += "; ";
        text += what;
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

class Runner {
public:
    explicit Runner(CheckOptions opts) : opts_(std::move(opts)) {}

    const Timed& suite(const std::string& name, const DomainSpec& spec, const std::string& label,
                       int resolution = 0) {
        const std::string key = name + "/" + label + "/" + std::to_string(resolution);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        CheckOptions o = opts_;
        o.resolution = resolution;
        const auto t0 = Clock::now();
        Timed t{run_suite(name, spec, o), 0.0};
        t.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        return cache_.emplace(key, std::move(t)).first->second;
    }

    const CheckOptions& options() const { return opts_; }

private:
    CheckOptions opts_;
    std::map<std::string, Timed> cache_;
};

const CheckItem* find(const SuiteReport& r, const std::string& name) {
    for (const auto& c : r.items)
        if (c.name == name) return &c;
    return nullptr;
}

void items(Line& line, const std::string& label, const SuiteReport& r, const std::vector<std::string>& names) {
    for (const auto& n : names) {
        const CheckItem* c = find(r, n);
        if (!c) {
            const CheckItem* failed = find(r, "numerical_failure");
            line.require(false, label + " " + n + " missing" + (failed ? " (" + failed->detail + ")" : ""));
            continue;
        }
        line.require(c->pass, label + " " + n + " " + fmt("%.3g", c->measured) + " " + c->relation + " " +
                                  fmt("%.3g", c->tolerance));
    }
}

void runtime(Line& line, double seconds, double limit) {
    line.require(seconds <= limit, fmt("%.1f s", seconds) + " <= " + fmt("%.0f s", limit));
}

}  // namespace

int main(int argc, char** argv) {
    CheckOptions opts;
    opts.defaults = load_defaults();
    if (argc > 1) opts.workers = std::max(1, std::atoi(argv[1]));
    Runner run(opts);

    const DomainSpec ball = DomainSpec::ball(2);
    const DomainSpec ell = DomainSpec::ellipsoid({1.0, 4.0});
    const DomainSpec ell12 = DomainSpec::ellipsoid({1.0, 2.0});

    std::vector<std::pair<std::string, std::function<Line()>>> criteria;

    criteria.emplace_back("A1 ball oracle", [&] {
        Line l;
        const auto& t = run.suite("oracle", ball, "ball");
        items(l, "ball", t.report, {"two_point_vs_closed_form", "direction_vs_closed_form", "chl_vs_closed_form"});
        runtime(l, t.seconds, 30.0);
        return l;
    });
    criteria.emplace_back("A2 stationarity", [&] {
        Line l;
        items(l, "(1,4)", run.suite("oracle", ell, "ell").report,
              {"stationarity_defects", "mu_min", "dual_normalization"});
        return l;
    });
    criteria.emplace_back("A3 isometry and metric", [&] {
        Line l;
        for (const auto& [label, spec] : {std::pair{"ball", ball}, std::pair{"(1,4)", ell}})
            items(l, label, run.suite("oracle", spec, label == std::string("ball") ? "ball" : "ell").report,
                  {"isometry", "metric_homogeneity", "closed_form_kernels"});
        return l;
    });
    criteria.emplace_back("A4 green versus poisson", [&] {
        Line l;
        double seconds = 0.0;
        for (const auto& [label, spec] : {std::pair{"ball", ball}, std::pair{"(1,4)", ell}}) {
            const auto& t = run.suite("gvp", spec, label);
            items(l, label, t.report, {label == std::string("ball") ? "gvp_identity_closed_form" : "gvp_identity"});
            seconds += t.seconds;
        }
        runtime(l, seconds, 300.0);
        return l;
    });
    criteria.emplace_back("A5 boundary asymptotics", [&] {
        Line l;
        for (const auto& [label, spec] : {std::pair{"ball", ball}, std::pair{"(1,4)", ell}})
            items(l, label, run.suite("asymptotics", spec, label).report,
                  {"normal_ray_limit", "transversal_limits", "tangential_limits"});
        return l;
    });
    criteria.emplace_back("A6 extremality", [&] {
        Line l;
        for (const auto& [label, spec] : {std::pair{"ball", ball}, std::pair{"(1,4)", ell}})
            items(l, label, run.suite("extremal", spec, label).report,
                  {"extremal_below_poisson", "equality_on_geodesic"});
        return l;
    });
    criteria.emplace_back("A7 monge-ampere and convexity", [&] {
        Line l;
        for (const auto& [label, spec] : {std::pair{"ball", ball}, std::pair{"(1,4)", ell}}) {
            items(l, label, run.suite("ma", spec, label).report,
                  {"green_degeneracy", "green_psh", "poisson_degeneracy", "poisson_psh"});
            items(l, label, run.suite("convexity", spec, label).report,
                  {"level_set_points", "level_set_residual", "restricted_hessian_min"});
        }
        return l;
    });
    criteria.emplace_back("A8 reproducing formula", [&] {
        Line l;
        const auto& b = run.suite("reproduce", ball, "ball");
        items(l, "ball", b.report, {"kappa_drift", "reproduce_constant", "reproduce_re_z1", "reproduce_quadratic"});
        runtime(l, b.seconds, 60.0);
        const auto& e = run.suite("reproduce", ell12, "(1,2)", 24);
        items(l, "(1,2)", e.report, {"reproduce_constant", "reproduce_re_z1", "reproduce_quadratic"});
        runtime(l, e.seconds, run.options().workers >= 8 ? 600.0 : 3600.0);
        return l;
    });
    criteria.emplace_back("A9 projection", [&] {
        Line l;
        for (const auto& [label, spec] : {std::pair{"ball", ball}, std::pair{"(1,4)", ell}})
            items(l, label, run.suite("projection", spec, label).report,
                  {"left_inverse_identity", "projection_idempotent", "gradient_vs_fd", "poisson_monotone",
                   "retraction_idempotent", "retraction_offset"});
        return l;
    });
    criteria.emplace_back("A10 determinism", [&] {
        Line l;
        for (const std::string suite : {"gvp", "asymptotics", "projection"}) {
            const std::string first = dump(to_json(run.suite(suite, ell, "(1,4)").report));
            const std::string again = dump(to_json(run_suite(suite, ell, run.options())));
            CheckOptions other = run.options();
            other.workers = other.workers == 1 ? 3 : 1;
            const std::string workers = dump(to_json(run_suite(suite, ell, other)));
            l.require(first == again && first == workers,
                      suite + (first == again && first == workers ? " identical" : " differs") + " (" +
                          std::to_string(first.size()) + " bytes)");
        }
        return l;
    });

    bool all = true;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = Clock::now();
        Line l = fn();
        const double s = std::chrono::duration<double>(Clock::now() - t0).count();
        all = all && l.pass;
        std::printf("%-4s %s  %s  [%s]\n", l.pass ? "PASS" : "FAIL", name.c_str(), l.text.c_str(),
                    fmt("%.1f s", s).c_str());
        std::fflush(stdout);
    }
    std::printf("%s\n", all ? "all criteria pass" : "some criteria fail");
    return all ? 0 : 1;
}
