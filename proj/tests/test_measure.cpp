#include "doctest.h"

#include <sstream>

#include "plurikernel/kernels.hpp"
#include "plurikernel/measure.hpp"

using namespace plurikernel;

namespace {

CVec pt(std::initializer_list<cplx> v) {
    CVec z(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto c : v) z(i++) = c;
    return z;
}

MeasureOptions closed() {
    MeasureOptions o;
    o.source = KernelSource::closed_form;
    return o;
}

MeasureOptions solved(int modes = 24) {
    MeasureOptions o;
    o.solver.modes = modes;
    return o;
}

PluriharmonicFunction quadratic() {
    return {{{1.0, {1, 1}}, {1.0, {2, 0}}}, 2.0};
}

}  // namespace

TEST_CASE("omega on the circle and the sphere") {
    const auto disc = build_grid(DomainSpec::ball(1), 256);
    CHECK(std::abs(disc.omega_mass() - 2.0 * kPi) < 1e-10);

    const auto g = build_grid(DomainSpec::ball(2), 12);
    double lo = 1e300, hi = 0.0;
    for (const auto& q : g.nodes) {
        lo = std::min(lo, q.density);
        hi = std::max(hi, q.density);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo <= 1.0 + 1e-10);
    // omega = 2 dsigma on the unit sphere of C^2
    CHECK(std::abs(lo - 2.0) < 1e-12);
    CHECK(std::abs(g.omega_mass() - 4.0 * kPi * kPi) < 1e-10);
}

TEST_CASE("omega does not depend on the defining function") {
    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    const auto g = build_grid(e, 6);
    double worst = 0.0;
    for (const auto& q : g.nodes) {
        const RVec gr = e.real_grad(q.point.p);
        const double r = e.r(q.point.p);
        // r2 = 2 r + r^2
        const RVec gr2 = (2.0 + 2.0 * r) * gr;
        const RMat h2 = (2.0 + 2.0 * r) * e.real_hessian(q.point.p) + 2.0 * gr * gr.transpose();
        const double d2 = omega_density(gr2, h2, q.point.frame);
        worst = std::max(worst, std::abs(d2 - q.density) / q.density);
    }
    CHECK(worst < 1e-10);
    CHECK_THROWS_AS(omega_density(e.real_grad(g.nodes[0].point.p), e.real_hessian(g.nodes[0].point.p),
                                  RMat::Zero(4, 3)),
                    std::invalid_argument);
}

TEST_CASE("grid convergence and positivity") {
    const auto b = DomainSpec::ball(2);
    const double m1 = build_grid(b, 8).omega_mass(), m2 = build_grid(b, 16).omega_mass();
    CHECK(std::abs(m2 - m1) / m2 <= 1e-6);

    const auto e = DomainSpec::ellipsoid({1.0, 4.0});
    const auto ge = build_grid(e, 10);
    CHECK(ge.nodes.size() == 1000u);
    for (const auto& q : ge.nodes) {
        CHECK(q.weight > 0.0);
        CHECK(q.density > 0.0);
    }
    const double e1 = ge.omega_mass(), e2 = build_grid(e, 20).omega_mass();
    CHECK(std::abs(e2 - e1) / e2 <= 1e-4);

    CHECK_THROWS_AS(build_grid(DomainSpec::ball(3), 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(DomainSpec::perturbed_ellipsoid({1.0, 2.0}, 0.05, {{1.0, {2, 0, 0, 2}}}), 4),
                    std::invalid_argument);
}

TEST_CASE("kappa calibration") {
    const auto k1 = calibrate_kappa(1);
    CHECK(std::abs(k1.kappa - 1.0 / (2.0 * kPi)) < 1e-12);
    const auto k2 = calibrate_kappa(2, 16);
    CHECK(std::abs(k2.kappa - 1.0 / (4.0 * kPi * kPi)) < 1e-12);
    CHECK(k2.drift <= 1e-6);

    const auto b = DomainSpec::ball(2);
    const auto g = build_grid(b, 48);
    const std::vector<CVec> zs = {pt({0.0, 0.0}), pt({0.4, 0.0}), pt({0.2, cplx(0.0, 0.3)}),
                                  pt({cplx(-0.1, 0.2), 0.3}), pt({0.0, cplx(0.3, -0.3)})};
    for (const auto& z : zs) CHECK(std::abs(demailly_mass(g, sample_kernel(g, z, closed()), k2) - 1.0) < 1e-6);
}

TEST_CASE("reproducing formula on the ball") {
    const auto b = DomainSpec::ball(2);
    const auto k = calibrate_kappa(2);
    const auto g = build_grid(b, 24);
    const PluriharmonicFunction re_z1{{{1.0, {1, 0}}}, 0.0};
    auto rep = reproduce_pluriharmonic(re_z1, g, sample_kernel(g, pt({0.0, 0.0}), closed()), k);
    CHECK(std::abs(rep.estimate) < 1e-12);
    CHECK(rep.skipped == 0);

    const CVec z = pt({0.3, cplx(0.1, 0.2)});
    const auto s = sample_kernel(g, z, closed());
    rep = reproduce_pluriharmonic(quadratic(), g, s, k);
    CHECK(rep.error <= 1e-3);
    CHECK(std::abs(rep.reference - quadratic()(z)) < 1e-15);
    CHECK(demailly_mass(g, s, k) ==
          reproduce_pluriharmonic(PluriharmonicFunction::constant_function(1.0), g, s, k).estimate);

    // error drops by at least 4 per doubling until it reaches rounding
    double prev = 0.0;
    for (int res : {4, 8, 16}) {
        const auto gr = build_grid(b, res);
        const double err = reproduce_pluriharmonic(quadratic(), gr, sample_kernel(gr, z, closed()), k).error;
        if (prev > 1e-12) CHECK(err <= prev / 4.0);
        prev = err;
    }
}

TEST_CASE("reproducing formula on an ellipsoid with solved kernels") {
    const auto e = DomainSpec::ellipsoid({1.0, 2.0});
    const auto g = build_grid(e, 10);
    const CVec z = pt({0.1, 0.2});
    const auto rep = reproduce_pluriharmonic(e, quadratic(), z, g, solved());
    CHECK(rep.error <= 2e-2);
    CHECK(std::abs(demailly_mass(e, z, g, solved()) - 1.0) <= 2e-2);
    // solved kernels agree with the closed form
    const auto a = sample_kernel(g, z, solved());
    const auto c = sample_kernel(g, z, closed());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - c.values[i]) / c.values[i]);
    CHECK(worst < 1e-9);
}

TEST_CASE("sampling does not depend on the worker count") {
    const auto e = DomainSpec::ellipsoid({1.0, 2.0});
    const auto g = build_grid(e, 4);
    auto one = solved(16), three = solved(16);
    three.workers = 3;
    const auto a = sample_kernel(g, pt({0.1, 0.2}), one);
    const auto b = sample_kernel(g, pt({0.1, 0.2}), three);
    CHECK(a.values == b.values);
}

TEST_CASE("input validation and CSV dump") {
    const auto b = DomainSpec::ball(2);
    const auto g = build_grid(b, 4);
    CHECK_THROWS_AS(sample_kernel(g, pt({1.0, 0.5}), closed()), std::invalid_argument);
    const PluriharmonicFunction bad{{{1.0, {-1, 0}}}, 0.0};
    CHECK_THROWS_AS(bad.validate(2), std::invalid_argument);
    const PluriharmonicFunction arity{{{1.0, {1}}}, 0.0};
    CHECK_THROWS_AS(arity.validate(2), std::invalid_argument);
    CHECK_THROWS_AS(reproduce_pluriharmonic(quadratic(), g, sample_kernel(g, pt({0.0, 0.0}), closed()),
                                            calibrate_kappa(1)),
                    std::invalid_argument);

    std::ostringstream os;
    write_node_csv(os, g, sample_kernel(g, pt({0.0, 0.0}), closed()));
    const std::string csv = os.str();
    CHECK(csv.rfind("s,alpha,beta,re_p1,im_p1,re_p2,im_p2,weight,density,kernel,skipped\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
}
