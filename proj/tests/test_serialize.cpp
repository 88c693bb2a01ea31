#include "doctest.h"

#include <cmath>
#include <limits>

#include "plurikernel/serialize.hpp"

using namespace plurikernel;

namespace {

CVec pt(std::initializer_list<cplx> v) {
    CVec z(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto c : v) z(i++) = c;
    return z;
}

}  // namespace

TEST_CASE("complex values") {
    CHECK(to_json(cplx(1.5, -2.0)) == Json::array({1.5, -2.0}));
    CHECK(complex_from_json(Json::array({0.25, 3})) == cplx(0.25, 3.0));
    CHECK(complex_from_json(Json(2.0)) == cplx(2.0, 0.0));
    CHECK_THROWS_AS(complex_from_json(Json::array({1.0})), std::invalid_argument);
    CHECK_THROWS_AS(complex_from_json(Json("x")), std::invalid_argument);
    const CVec z = pt({cplx(0.1, 0.2), cplx(-0.3, 0.0)});
    CHECK(cvec_from_json(to_json(z)) == z);
}

TEST_CASE("domain round trip") {
    const std::vector<DomainSpec> specs{DomainSpec::ball(3), DomainSpec::ellipsoid({1.0, 4.0}),
                                        DomainSpec::perturbed_ellipsoid({1.0, 2.0}, 0.05, {{1.0, {2, 0, 0, 2}}})};
    for (const auto& s : specs) CHECK(domain_from_json(to_json(s)) == s);
    CHECK(dump(to_json(DomainSpec::ball(2)), -1) == R"({"kind":"ball","n":2})");

    const Json with_eps = Json::parse(R"({"kind":"ellipsoid","a":[1,2],"eps":0.01,"bump":[]})");
    CHECK(domain_from_json(with_eps).kind() == DomainKind::perturbed_ellipsoid);
    CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"kind":"torus"})")), std::invalid_argument);
    CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"kind":"ball"})")), std::invalid_argument);
    CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"kind":"ball","n":1.5})")), std::invalid_argument);
    CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"kind":"ellipsoid","a":[1,-2]})")), std::invalid_argument);
    CHECK_THROWS_AS(load_domain("/nonexistent/domain.json"), std::invalid_argument);
}

TEST_CASE("deterministic text") {
    Json j;
    j["b"] = 0.1;
    j["a"] = Json::array({1, 2.5});
    j["nan"] = std::numeric_limits<double>::quiet_NaN();
    j["rows"] = Json::array({Json::array({1.0, 2.0}), Json::array({3.0, 4.0})});
    CHECK(dump(j, -1) == R"({"b":0.10000000000000001,"a":[1,2.5],"nan":null,"rows":[[1,2],[3,4]]})");
    CHECK(dump(j) ==
          "{\n  \"b\": 0.10000000000000001,\n  \"a\": [1, 2.5],\n  \"nan\": null,\n  \"rows\": [\n    [1, 2],\n"
          "    [3, 4]\n  ]\n}");
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(digest(j) == digest(Json::parse(dump(j))));
    CHECK(digest(j).size() == 16);
}

TEST_CASE("geodesic round trip") {
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    SolverConfig cfg;
    cfg.modes = 48;
    const auto g = solve_two_point(e, pt({0.1, cplx(0.0, 0.2)}), pt({-0.2, 0.1}), cfg);
    const Json j = to_json(g);
    CHECK(j.at("version") == library_version());
    CHECK(j.at("meta").at("kind") == "two_point");

    const auto back = geodesic_from_json(Json::parse(dump(j)));
    CHECK(back.phi.coeffs() == g.phi.coeffs());
    CHECK(back.residuals.converged);
    CHECK(back.residuals.boundary_defect < 1e-12);
    CHECK(std::get<TwoPointParams>(back.meta).t == std::get<TwoPointParams>(g.meta).t);
    CHECK(dump(to_json(back.meta)) == dump(j.at("meta")));

    // a warm start read back from text converges at once
    const auto again = solve_two_point(e, pt({0.1, cplx(0.0, 0.2)}), pt({-0.2, 0.1}), cfg, &back);
    CHECK((again.phi.coeffs() - g.phi.coeffs()).cwiseAbs().maxCoeff() < 1e-12);

    Json bad = j;
    bad["coefficients"] = Json::array();
    CHECK_THROWS_AS(geodesic_from_json(bad), std::invalid_argument);
    bad = j;
    bad["meta"]["kind"] = "spiral";
    CHECK_THROWS_AS(geodesic_from_json(bad), std::invalid_argument);
}
