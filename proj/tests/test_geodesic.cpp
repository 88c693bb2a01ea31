#include "doctest.h"

#include <random>

#include "plurikernel/geodesic.hpp"
#include "stationary_system.hpp"

using namespace plurikernel;

namespace {

CVec pt(std::initializer_list<cplx> v) {
    CVec z(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto c : v) z(i++) = c;
    return z;
}

double boundary_gap(const GeodesicDisc& a, const GeodesicDisc& b) {
    const int m = 256;
    double e = 0.0;
    for (int k = 0; k < m; ++k) {
        const cplx zeta = std::polar(1.0, 2.0 * kPi * k / m);
        e = std::max(e, (a(zeta) - b(zeta)).norm());
    }
    return e;
}

DomainSpec bumpy() {
    return DomainSpec::perturbed_ellipsoid({1.0, 4.0}, 0.05, {{1.0, {2, 0, 0, 2}}, {1.0, {0, 0, 4, 0}}});
}

void check_jacobian(const detail::StationarySystem& sys, const RVec& x) {
    RMat jac;
    sys.evaluate(x, &jac);
    const double h = 1e-6;
    double worst = 0.0;
    for (int c = 0; c < sys.unknowns(); ++c) {
        RVec xp = x, xm = x;
        xp(c) += h;
        xm(c) -= h;
        const RVec fd = (sys.evaluate(xp, nullptr) - sys.evaluate(xm, nullptr)) / (2 * h);
        worst = std::max(worst, (fd - jac.col(c)).lpNorm<Eigen::Infinity>());
    }
    CHECK(worst < 1e-6);
}

RVec random_state(const detail::StationarySystem& sys, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    RVec x(sys.unknowns());
    for (int i = 0; i < x.size(); ++i) x(i) = 0.1 * gauss(rng);
    const int deg = sys.grid().degree;
    x(2 * 1) += 0.5;             // phi_1 ~ 0.5 zeta
    x(2 * (deg + 1) + 3) += 0.3;  // phi_2 ~ 0.3 i zeta
    const int xo = sys.extras_offset();
    for (int i = xo; i < x.size(); ++i) x(i) = 0.2 + 0.05 * (i - xo);
    return x;
}

}  // namespace

TEST_CASE("analytic Jacobian matches central differences") {
    using K = detail::Regime::Kind;
    const FourierGrid grid = FourierGrid::for_degree(6);
    const CVec p = boundary_along_ray(bumpy(), pt({1.0, cplx(0.2, 0.3)}));
    for (K kind : {K::two_point, K::two_point_boundary, K::direction, K::chl, K::chl_through,
                   K::two_point_balanced}) {
        detail::Regime rg;
        rg.kind = kind;
        rg.z = pt({0.1, cplx(0.0, 0.05)});
        rg.w = pt({0.3, 0.1});
        rg.v = pt({0.8, cplx(0.0, 0.6)});
        rg.p = p;
        rg.nu = unit_normal(bumpy(), p);
        rg.weights = RVec::Constant(2, 1.0);
        rg.weights(1) = 4.0;
        const detail::StationarySystem sys(bumpy(), grid, rg);
        CHECK(sys.residual_size() > sys.unknowns());
        check_jacobian(sys, random_state(sys, 17 + static_cast<int>(kind)));
    }
}

TEST_CASE("ball closed forms satisfy the invariants") {
    const auto b = DomainSpec::ball(2);
    auto g = ball_geodesic_direction(b, pt({0.0, 0.0}), pt({1.0, 0.0}));
    CHECK(std::abs(g(0.4)(0) - 0.4) < 1e-14);
    CHECK((g.phi_tilde.eval(0.3) - pt({1.0, 0.0})).norm() < 1e-13);
    CHECK(std::abs(g.mu(1.1) - 1.0) < 1e-13);
    CHECK(g.residuals.boundary_defect < 1e-13);
    CHECK(g.residuals.dual_defect < 1e-13);
    CHECK(g.residuals.norm_defect < 1e-13);

    g = ball_geodesic_chl(b, pt({1.0, 0.0}), pt({1.0, 0.0}));
    CHECK(std::abs(g(cplx(0.2, 0.3))(0) - cplx(0.2, 0.3)) < 1e-14);

    g = ball_geodesic_two_point(b, pt({0.1, cplx(0.2, -0.1)}), pt({-0.3, 0.4}));
    CHECK(g.residuals.boundary_defect < 1e-13);
    CHECK(g.residuals.dual_defect < 1e-12);
    CHECK(g.residuals.norm_defect < 1e-12);
    CHECK_THROWS_AS(ball_geodesic_chl(DomainSpec::ellipsoid({1.0, 4.0}), pt({1.0, 0.0}), pt({1.0, 0.0})),
                    std::invalid_argument);
}

TEST_CASE("corrupting a coefficient shows up in the dual defect") {
    const auto b = DomainSpec::ball(2);
    auto g = ball_geodesic_two_point(b, pt({0.1, 0.0}), pt({0.0, 0.5}));
    g.phi.coeffs()(1, 1) *= -1.0;
    CHECK(residual_report(g).dual_defect > 1e-3);
}

TEST_CASE("two-point solves on the ball") {
    const auto b = DomainSpec::ball(2);
    auto g = solve_two_point(b, pt({0.0, 0.0}), pt({0.5, 0.0}));
    CHECK(std::abs(std::get<TwoPointParams>(g.meta).t - 0.5) < 1e-12);
    CHECK((g(0.7) - pt({0.7, 0.0})).norm() < 1e-10);

    g = solve_two_point(b, pt({0.0, 0.0}), pt({0.0, cplx(0.0, 0.3)}));
    CHECK(std::abs(std::get<TwoPointParams>(g.meta).t - 0.3) < 1e-12);
    CHECK((g(0.7) - pt({0.0, cplx(0.0, 0.7)})).norm() < 1e-10);
}

TEST_CASE("direction solves on the ball") {
    const auto b = DomainSpec::ball(2);
    auto g = solve_direction(b, pt({0.0, 0.0}), pt({2.0, 0.0}));
    CHECK(std::abs(std::get<DirectionParams>(g.meta).t - 0.5) < 1e-12);
    CHECK((g(0.6) - pt({0.6, 0.0})).norm() < 1e-10);
    const CVec u = pt({0.6, cplx(0.0, 0.8)});
    g = solve_direction(b, pt({0.0, 0.0}), u);
    CHECK(std::abs(std::get<DirectionParams>(g.meta).t - 1.0) < 1e-12);
    CHECK((g(0.6) - 0.6 * u).norm() < 1e-10);
}

TEST_CASE("CHL solves on the ball") {
    const auto b = DomainSpec::ball(2);
    const CVec e1 = pt({1.0, 0.0});
    auto g = solve_chl(b, e1, e1);
    CHECK((g(0.3) - pt({0.3, 0.0})).norm() < 1e-10);
    const CVec v = pt({1.0, 1.0}) / std::sqrt(2.0);
    g = solve_chl(b, e1, v);
    const cplx zeta(0.2, -0.4);
    CHECK((g(zeta) - (e1 + (zeta - 1.0) / std::sqrt(2.0) * v)).norm() < 1e-10);
}

TEST_CASE("solver matches the closed form from a perturbed start") {
    const auto b = DomainSpec::ball(2);
    SolverConfig cfg;
    cfg.initial_perturbation = 1e-2;
    cfg.seed = 4;
    const CVec z = pt({cplx(0.2, 0.1), -0.3});
    const CVec w = pt({0.1, cplx(0.4, 0.2)});
    auto g = solve_two_point(b, z, w, cfg);
    CHECK(g.residuals.iterations >= 2);
    CHECK(boundary_gap(g, ball_geodesic_two_point(b, z, w)) < 1e-8);
    const CVec v = pt({cplx(0.3, -0.2), 1.0});
    g = solve_direction(b, z, v, cfg);
    CHECK(boundary_gap(g, ball_geodesic_direction(b, z, v)) < 1e-8);
}

TEST_CASE("ellipsoid solves satisfy the invariants") {
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    auto g = solve_two_point(e, pt({0.0, 0.0}), pt({0.2, 0.1}));
    const double t = std::get<TwoPointParams>(g.meta).t;
    CHECK(t > 0.0);
    CHECK(t < 1.0);
    CHECK(g.residuals.boundary_defect < 1e-10);
    CHECK(g.residuals.dual_defect < 1e-10);
    CHECK(g.residuals.norm_defect < 1e-10);
    CHECK(g.residuals.mu_min > 0.0);
    for (int k = 0; k < 10; ++k) {
        const cplx zeta = std::polar(0.9 * k / 10.0, 0.7 * k);
        CHECK(std::abs(bilinear(g.phi_tilde.eval(zeta), g.phi.eval(zeta, 1)) - 1.0) < 1e-10);
    }

    g = solve_direction(e, pt({0.1, 0.0}), pt({0.0, 1.0}));
    CHECK(g.residuals.boundary_defect < 1e-10);
    CHECK(g.residuals.dual_defect < 1e-10);

    const CVec p = pt({1.0, 0.0});
    g = solve_chl(e, p, unit_normal(e, p));
    const CVec nu = unit_normal(e, p);
    const CVec d1 = g.phi.eval(1.0, 1);
    CHECK((g.phi.eval(1.0) - p).norm() < 1e-10);
    CHECK((d1 - hermitian(nu, nu) * nu).norm() < 1e-10);
    CHECK(std::abs(hermitian(g.phi.eval(1.0, 2), nu).imag()) < 1e-10);
}

TEST_CASE("CHL through an interior point") {
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    const CVec p = boundary_along_ray(e, pt({1.0, cplx(0.5, 0.5)}));
    const CVec z = pt({0.1, cplx(0.0, -0.2)});
    const auto g = solve_chl_through(e, p, z);
    const auto& meta = std::get<ChlThroughParams>(g.meta);
    CHECK(std::abs(meta.zeta) < 1.0);
    CHECK((g(meta.zeta) - z).norm() < 1e-9);
    const CVec nu = unit_normal(e, p);
    const CVec d1 = g.phi.eval(1.0, 1);
    const CVec v = d1 / d1.norm();
    CHECK(std::abs(hermitian(v, nu).imag()) < 1e-10);
    CHECK((d1 - hermitian(v, nu) * v).norm() < 1e-9);
    // the same disc from the CHL data
    const auto h = solve_chl(e, p, v);
    CHECK(boundary_gap(g, h) < 1e-8);
    // warm restart from a nearby point converges in few steps
    const auto g2 = solve_chl_through(e, p, z + pt({0.01, 0.0}), SolverConfig{}, &g);
    CHECK(g2.residuals.converged);
}

TEST_CASE("balanced pair solves") {
    const auto b = DomainSpec::ball(2);
    const CVec z = pt({0.2, cplx(0.0, 0.3)}), w = pt({-0.4, 0.1});
    auto g = solve_pair(b, z, w);
    CHECK(std::abs(std::atanh(pair_parameter(g)) - ball_kobayashi_distance(z, w)) < 1e-12);

    // z close to the boundary of an eccentric ellipsoid
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    const CVec zb = pt({0.3, cplx(0.1, 0.4)});
    g = solve_pair(e, zb, w);
    const auto& pp = std::get<PairParams>(g.meta);
    CHECK((g(pp.zeta_z) - zb).norm() < 1e-10);
    CHECK((g(pp.zeta_w) - w).norm() < 1e-10);
    CHECK(std::abs((pp.zeta_w - pp.zeta_z).imag()) < 1e-14);
    CHECK((pp.zeta_w - pp.zeta_z).real() > 0.0);
    CHECK(g.residuals.boundary_defect < 1e-10);
    CHECK(g.residuals.dual_defect < 1e-10);
    const CVec c1 = g.phi.eval(0.0, 1), c2 = g.phi.eval(0.0, 2) / 2.0;
    CHECK(std::abs(c2(0) * std::conj(c1(0)) + 4.0 * c2(1) * std::conj(c1(1))) < 1e-10);
    const auto h = solve_pair(e, w, zb);
    CHECK(std::abs(pair_parameter(g) - pair_parameter(h)) < 1e-10);
}

TEST_CASE("perturbed ellipsoid via homotopy") {
    const auto spec = bumpy();
    const auto g = solve_two_point(spec, pt({0.1, 0.0}), pt({-0.2, cplx(0.1, 0.2)}));
    CHECK(g.residuals.homotopy_steps >= 1);
    CHECK(g.residuals.boundary_defect < 1e-10);
    CHECK(g.residuals.dual_defect < 1e-9);
    const CVec p = boundary_along_ray(spec, pt({0.5, cplx(0.3, 0.3)}));
    const auto c = solve_chl_through(spec, p, pt({0.0, 0.1}));
    CHECK((c(std::get<ChlThroughParams>(c.meta).zeta) - pt({0.0, 0.1})).norm() < 1e-9);
    const auto q = solve_pair(spec, pt({0.1, 0.0}), pt({-0.2, cplx(0.1, 0.2)}));
    CHECK(std::abs(pair_parameter(q) - std::get<TwoPointParams>(g.meta).t) < 1e-9);
}

TEST_CASE("degenerate inputs") {
    const auto b = DomainSpec::ball(2);
    CHECK_THROWS_AS(solve_two_point(b, pt({0.1, 0.0}), pt({0.1, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(solve_two_point(b, pt({0.1, 0.0}), pt({1.1, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(solve_pair(b, pt({0.1, 0.0}), pt({0.1, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(solve_direction(b, pt({0.1, 0.0}), pt({0.0, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(solve_chl(b, pt({1.0, 0.0}), pt({0.0, 1.0})), std::invalid_argument);
    CHECK_THROWS_AS(solve_chl(b, pt({0.9, 0.0}), pt({1.0, 0.0})), std::invalid_argument);
}
