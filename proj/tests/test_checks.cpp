#include "doctest.h"

#include <cstdlib>
#include <fstream>

#include "plurikernel/checks.hpp"

using namespace plurikernel;

namespace {

CheckOptions light() {
    CheckOptions o;
    o.defaults["gvp"]["instances"] = 2;
    o.defaults["oracle"]["instances"] = 2;
    o.defaults["oracle"]["pairs"] = 3;
    return o;
}

}  // namespace

TEST_CASE("bundled defaults") {
    const Json d = bundled_defaults();
    for (const auto& s : suite_names()) CHECK(d.contains(s));
    CHECK(d.at("oracle").at("geodesic_sup").get<double>() == 1e-8);
    CHECK(d.at("gvp").at("ball_tol").get<double>() == 1e-4);
    CHECK(d.at("reproduce").at("tol").get<double>() == 2e-2);

    ::unsetenv("PLURIKERNEL_DEFAULTS");
    CHECK(load_defaults() == d);
    const std::string path = "test_checks_defaults.json";
    {
        std::ofstream f(path);
        f << R"({"solver": {"modes": 16}})";
    }
    ::setenv("PLURIKERNEL_DEFAULTS", path.c_str(), 1);
    CHECK(load_defaults().at("solver").at("modes") == 16);
    ::setenv("PLURIKERNEL_DEFAULTS", "/nonexistent/defaults.json", 1);
    CHECK_THROWS_AS(load_defaults(), std::invalid_argument);
    ::unsetenv("PLURIKERNEL_DEFAULTS");
}

TEST_CASE("solver settings precedence") {
    CheckOptions o;
    CHECK(o.solver("oracle").modes == 64);
    CHECK(o.solver("ma").modes == 32);
    o.modes = 20;
    o.tol = 1e-9;
    o.seed = 7;
    const SolverConfig c = o.solver("ma");
    CHECK(c.modes == 20);
    CHECK(c.newton_tol == 1e-9);
    CHECK(c.seed == 7u);
}

TEST_CASE("suite dispatch and validation") {
    const auto b = DomainSpec::ball(2);
    CHECK_THROWS_AS(run_suite("nope", b), std::invalid_argument);
    CheckOptions o;
    o.workers = 0;
    CHECK_THROWS_AS(run_suite("gvp", b, o), std::invalid_argument);
    o = CheckOptions{};
    o.defaults.erase("gvp");
    CHECK_THROWS_AS(run_suite("gvp", b, o), std::invalid_argument);
    const auto bumpy = DomainSpec::perturbed_ellipsoid({1.0, 2.0}, 0.05, {{1.0, {2, 0, 0, 2}}});
    CHECK_THROWS_AS(run_suite("reproduce", bumpy), std::invalid_argument);
    CHECK_FALSE(SuiteReport{}.pass());
}

TEST_CASE("gvp and oracle suites on the ball") {
    const auto b = DomainSpec::ball(2);
    auto rep = run_suite("gvp", b, light());
    REQUIRE(rep.items.size() == 1);
    CHECK(rep.items[0].name == "gvp_identity_closed_form");
    CHECK(rep.items[0].measured <= 1e-4);
    CHECK(rep.pass());

    rep = run_suite("oracle", b, light());
    CHECK(rep.pass());
    for (const auto& c : rep.items) CHECK_MESSAGE(c.pass, c.name);
    const Json j = to_json(rep);
    CHECK(j.at("suite") == "oracle");
    CHECK(j.at("pass") == true);
    CHECK(j.at("items").size() == rep.items.size());
    CHECK(j.at("items")[0].at("relation") == "<=");
}

TEST_CASE("reports repeat exactly and ignore the worker count") {
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    auto o = light();
    const std::string first = dump(to_json(run_suite("gvp", e, o)));
    CHECK(first == dump(to_json(run_suite("gvp", e, o))));
    o.workers = 2;
    CHECK(first == dump(to_json(run_suite("gvp", e, o))));
    o.seed = 2;
    CHECK(first != dump(to_json(run_suite("gvp", e, o))));
}

TEST_CASE("failed items fail the suite") {
    auto o = light();
    o.defaults["gvp"]["ball_tol"] = 0.0;
    const auto rep = run_suite("gvp", DomainSpec::ball(2), o);
    CHECK_FALSE(rep.pass());
    CHECK_FALSE(rep.items[0].pass);
}
