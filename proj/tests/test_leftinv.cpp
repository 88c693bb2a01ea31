#include "doctest.h"

#include <random>

#include "plurikernel/kernels.hpp"
#include "plurikernel/leftinv.hpp"

using namespace plurikernel;

namespace {

CVec pt(std::initializer_list<cplx> v) {
    CVec z(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto c : v) z(i++) = c;
    return z;
}

CVec random_interior(const DomainSpec& spec, std::mt19937_64& rng, double shrink = 0.95) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CVec d(spec.dimension());
    for (int j = 0; j < spec.dimension(); ++j) d(j) = cplx(gauss(rng), gauss(rng));
    return shrink * std::pow(u(rng), 0.25) * boundary_along_ray(spec, d);
}

GeodesicDisc ball_line() {
    return ball_geodesic_direction(DomainSpec::ball(2), pt({0.0, 0.0}), pt({1.0, 0.0}));
}

}  // namespace

TEST_CASE("left inverse of the linear disc") {
    const auto g = ball_line();
    CHECK(std::abs(left_inverse(g, pt({0.3, cplx(0.0, 0.2)})) - 0.3) < 1e-12);
    CHECK(std::abs(left_inverse(g, pt({0.0, 0.9}))) < 1e-12);
    CHECK(std::abs(left_inverse(g, g(0.5)) - 0.5) < 1e-12);
    CHECK((lempert_projection(g, pt({0.3, cplx(0.0, 0.2)})) - pt({0.3, 0.0})).norm() < 1e-12);
    CHECK((left_inverse_gradient(g, pt({0.2, 0.4})) - pt({1.0, 0.0})).norm() < 1e-12);
    CHECK(std::abs(left_inverse(g, pt({1.0, 0.0})) - 1.0) < 1e-12);
    CHECK_THROWS_AS(left_inverse(g, pt({1.0, 0.5})), std::invalid_argument);
}

TEST_CASE("left inverse identity on solved geodesics") {
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    const auto g = solve_two_point(e, pt({0.1, cplx(0.0, 0.1)}), pt({-0.3, 0.2}));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const cplx zeta = std::polar(std::sqrt(u(rng)) * 0.98, 2.0 * kPi * u(rng));
        worst = std::max(worst, std::abs(left_inverse(g, g(zeta)) - zeta));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("projection is idempotent") {
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    const auto g = solve_direction(e, pt({0.2, 0.0}), pt({cplx(0.0, 1.0), 0.5}));
    std::mt19937_64 rng(8);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const CVec z = random_interior(e, rng);
        const CVec r = lempert_projection(g, z);
        worst = std::max(worst, (lempert_projection(g, r) - r).norm());
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("gradient formula against finite differences") {
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    const auto g = solve_two_point(e, pt({0.0, 0.1}), pt({0.4, cplx(0.1, -0.1)}));
    std::mt19937_64 rng(12);
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const CVec z = random_interior(e, rng, 0.9);
        const CVec grad = left_inverse_gradient(g, z);
        for (int j = 0; j < 2; ++j) {
            CVec ep = z, em = z;
            ep(j) += h;
            em(j) -= h;
            const cplx fd = (left_inverse(g, ep) - left_inverse(g, em)) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - grad(j)) / std::max(1.0, std::abs(grad(j))));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("boundary derivative") {
    const auto b = DomainSpec::ball(2);
    const auto g = ball_line();
    const CVec e1 = pt({1.0, 0.0});
    CHECK(std::abs(boundary_derivative(g, e1, pt({cplx(0.3, 0.1), 0.7})) - cplx(0.3, 0.1)) < 1e-14);

    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    const CVec p = boundary_along_ray(e, pt({1.0, cplx(0.3, 0.2)}));
    const auto c = solve_chl(e, p, unit_normal(e, p));
    CHECK(std::abs(boundary_derivative(c, p, c.phi.eval(1.0, 1)) - 1.0) < 1e-10);
    const auto bp = normal(e, p);
    const CVec tangent = from_real(bp.frame.col(1)) - hermitian(from_real(bp.frame.col(1)), bp.normal) * bp.normal;
    CHECK(std::abs(boundary_derivative(c, p, tangent)) < 1e-12);
    CHECK(std::abs(boundary_derivative(c, p, c.phi_tilde.eval(1.0).conjugate()) -
                   hermitian(c.phi_tilde.eval(1.0).conjugate(), unit_normal(e, p)) /
                       hermitian(c.phi.eval(1.0, 1), unit_normal(e, p))) < 1e-14);

    // limit of the interior gradient at zeta -> 1
    auto gap = [](const GeodesicDisc& g, const CVec& q, const CVec& w, double delta) {
        const cplx interior = bilinear(left_inverse_gradient(g, g(1.0 - delta)), w);
        const cplx edge = boundary_derivative(g, q, w);
        return std::abs(interior - edge) / std::abs(edge);
    };
    const CVec w = pt({cplx(0.2, 0.5), cplx(-0.4, 0.1)});
    const auto e2 = DomainSpec::ellipsoid({1.0, 2.0});
    const CVec p2 = boundary_along_ray(e2, pt({1.0, cplx(0.3, 0.2)}));
    const auto c2 = solve_chl(e2, p2, unit_normal(e2, p2));
    CHECK(gap(c2, p2, unit_normal(e2, p2), 1e-4) <= 1e-4);
    CHECK(gap(c2, p2, w, 1e-4) <= 1e-4);
    // first-order approach on the more eccentric ellipsoid
    const CVec nu = unit_normal(e, p);
    for (const CVec& dir : {nu, w}) {
        CHECK(gap(c, p, dir, 1e-5) <= 0.11 * gap(c, p, dir, 1e-4));
        CHECK(gap(c, p, dir, 1e-5) <= 1e-4);
    }
    // at p the gradient is phi~(1)
    CHECK((left_inverse_gradient(c, p) - c.phi_tilde.eval(1.0)).norm() < 1e-8);
    (void)b;
}

TEST_CASE("projection does not increase the Poisson kernel") {
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    const CVec p = boundary_along_ray(e, pt({1.0, cplx(0.2, 0.4)}));
    const CVec nu = unit_normal(e, p);
    const CVec v = (nu + pt({0.0, cplx(0.3, 0.2)}) - hermitian(pt({0.0, cplx(0.3, 0.2)}), nu) * nu).normalized();
    const auto g = solve_chl(e, p, v);
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const CVec z = random_interior(e, rng, 0.9);
        const CVec r = lempert_projection(g, z);
        CHECK(quadric_poisson(e, p, r) <= quadric_poisson(e, p, z) + 1e-8);
    }
}

TEST_CASE("example retraction") {
    const auto f = [](const CVec&, int, int) { return cplx(1.0); };
    const auto g = ball_line();
    const ExampleRetraction r0(2, 0.0, f);
    const CVec z = pt({cplx(0.2, 0.1), cplx(0.3, -0.4)});
    CHECK((r0(z) - lempert_projection(g, z)).norm() < 1e-12);

    const ExampleRetraction r(2, 0.1, f);
    std::mt19937_64 rng(4);
    const auto b = DomainSpec::ball(2);
    for (int i = 0; i < 100; ++i) {
        const CVec x = random_interior(b, rng);
        CHECK((r(r(x)) - r(x)).norm() < 1e-12);
        CHECK(r(x).norm() < 1.0);
    }
    CHECK((r(pt({0.0, 0.5})) - lempert_projection(g, pt({0.0, 0.5})) - pt({0.025, 0.0})).norm() < 1e-12);
    CHECK_THROWS_AS(ExampleRetraction(2, 0.25, f), std::invalid_argument);
}
