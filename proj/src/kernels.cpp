#include "plurikernel/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

namespace plurikernel {

namespace {

CVec scale_up(const DomainSpec& spec, const CVec& z) { return to_ball(spec, z); }

void require_quadric(const DomainSpec& spec) {
    if (!spec.is_quadric()) throw std::invalid_argument("closed forms need a ball or ellipsoid");
}

}  // namespace

double kobayashi_distance(const DomainSpec& spec, const CVec& z, const CVec& w, const SolverConfig& cfg) {
    if (z.size() == w.size() && (z - w).norm() < 1e-12) {
        if (!(spec.r(z) < 0.0)) throw std::invalid_argument("z is not an interior point");
        return 0.0;
    }
    return std::atanh(pair_parameter(solve_pair(spec, z, w, cfg)));
}

double kobayashi_metric(const DomainSpec& spec, const CVec& z, const CVec& v, const SolverConfig& cfg) {
    const auto g = solve_direction(spec, z, v, cfg);
    return 1.0 / std::get<DirectionParams>(g.meta).t;
}

double green(const DomainSpec& spec, const CVec& z0, const CVec& z, const SolverConfig& cfg) {
    if (z.size() == z0.size() && (z - z0).norm() < 1e-12)
        throw std::invalid_argument("green function is -infinity at its pole");
    return std::log(pair_parameter(solve_pair(spec, z0, z, cfg)));
}

CVec spherical_rep_interior(const DomainSpec& spec, const CVec& z0, const CVec& z, const SolverConfig& cfg) {
    if (z.size() == z0.size() && (z - z0).norm() < 1e-12) {
        if (!(spec.r(z) < 0.0)) throw std::invalid_argument("z is not an interior point");
        return CVec::Zero(z.size());
    }
    return pair_spherical_point(solve_pair(spec, z0, z, cfg));
}

ChlSolve chl_solve(const DomainSpec& spec, const CVec& p, const CVec& z, const SolverConfig& cfg,
                   const GeodesicDisc* warm) {
    ChlSolve out{{}, solve_chl_through(spec, p, z, cfg, warm)};
    const CVec d1 = out.disc.phi.eval(1.0, 1);
    out.data.p = p;
    out.data.v = d1 / d1.norm();
    out.data.zeta = std::get<ChlThroughParams>(out.disc.meta).zeta;
    return out;
}

CHLData chl_coordinates(const DomainSpec& spec, const CVec& p, const CVec& z, const SolverConfig& cfg) {
    return chl_solve(spec, p, z, cfg).data;
}

CMat normal_rotation(const CVec& nu) {
    const int n = static_cast<int>(nu.size());
    const double a = std::abs(nu(0));
    const cplx phase = a > 0.0 ? nu(0) / a : cplx(1.0);
    const CVec nr = std::conj(phase) * nu;
    CVec u = nr;
    u(0) -= 1.0;
    CMat h = CMat::Identity(n, n);
    const double u2 = u.squaredNorm();
    if (u2 > 1e-28) h -= 2.0 * u * u.adjoint() / u2;
    return std::conj(phase) * h;
}

CVec spherical_rep_boundary(const DomainSpec& spec, const CVec& p, const CVec& z, const SolverConfig& cfg) {
    const CHLData d = chl_coordinates(spec, p, z, cfg);
    const CVec nu = unit_normal(spec, p);
    const CVec w = normal_rotation(nu) * d.v;
    const double v1 = hermitian(d.v, nu).real();
    CVec out = (d.zeta - 1.0) * v1 * w;
    out(0) += 1.0;
    return out;
}

double poisson_from(const CHLData& d, const CVec& nu) {
    const double v1 = hermitian(d.v, nu).real();
    return -disc_poisson(d.zeta) / (v1 * v1);
}

double poisson(const DomainSpec& spec, const CVec& p, const CVec& z, const SolverConfig& cfg,
               const GeodesicDisc* warm) {
    const ChlSolve s = chl_solve(spec, p, z, cfg, warm);
    return poisson_from(s.data, unit_normal(spec, p));
}

bool horosphere_contains(const DomainSpec& spec, const CVec& p, double radius, const CVec& z,
                         const SolverConfig& cfg) {
    if (!(radius > 0.0)) throw std::invalid_argument("horosphere radius must be > 0");
    return poisson(spec, p, z, cfg) < -1.0 / radius;
}

double extremal_member(const GeodesicDisc& g, const CVec& z) {
    const CVec p = g.phi.eval(1.0);
    const CVec nu = unit_normal(g.spec, p);
    const CVec d1 = g.phi.eval(1.0, 1);
    const double v1 = hermitian(CVec(d1 / d1.norm()), nu).real();
    return -disc_poisson(left_inverse(g, z)) / (v1 * v1);
}

double extremal_member(const DomainSpec& spec, const CVec& p, const CVec& v, const CVec& z,
                       const SolverConfig& cfg) {
    return extremal_member(solve_chl(spec, p, v, cfg), z);
}

double quadric_kobayashi_distance(const DomainSpec& spec, const CVec& z, const CVec& w) {
    require_quadric(spec);
    return ball_kobayashi_distance(scale_up(spec, z), scale_up(spec, w));
}

double quadric_kobayashi_metric(const DomainSpec& spec, const CVec& z, const CVec& v) {
    require_quadric(spec);
    return ball_kobayashi_metric(scale_up(spec, z), scale_up(spec, v));
}

double quadric_green(const DomainSpec& spec, const CVec& z0, const CVec& z) {
    require_quadric(spec);
    return ball_green(scale_up(spec, z0), scale_up(spec, z));
}

double quadric_poisson(const DomainSpec& spec, const CVec& p, const CVec& z) {
    require_quadric(spec);
    CVec q = scale_up(spec, p);
    q /= q.norm();
    const double stretch = scale_up(spec, scale_up(spec, p)).norm();
    return stretch * ball_poisson(q, scale_up(spec, z));
}

double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("extrapolation needs matching samples");
    std::vector<double> p = y;
    const std::size_t m = x.size();
    for (std::size_t lvl = 1; lvl < m; ++lvl)
        for (std::size_t i = 0; i + lvl < m; ++i)
            p[i] = (x[i + lvl] * p[i] - x[i] * p[i + 1]) / (x[i + lvl] - x[i]);
    return p[0];
}

CurveSpec boundary_curve(const DomainSpec& spec, const CVec& p, const CVec& d, double bend) {
    const auto bp = normal(spec, p);
    const cplx pair = hermitian(d, bp.normal);
    if (pair.real() < -1e-14) throw std::invalid_argument("curve leaves the domain at p");
    if (bend < 0.0) {
        Eigen::SelfAdjointEigenSolver<RMat> es(spec.real_hessian(p), Eigen::EigenvaluesOnly);
        bend = es.eigenvalues().maxCoeff() * d.squaredNorm() / (2.0 * spec.grad(p).norm());
    }
    CurveSpec c;
    const CVec nu = bp.normal;
    c.gamma = [p, d, nu, bend](double t) -> CVec {
        const double s = 1.0 - t;
        return p - s * d - bend * s * s * nu;
    };
    c.end_velocity = d;
    return c;
}

BoundaryLimitReport boundary_limit(const DomainSpec& spec, const CVec& p, const CurveSpec& curve,
                                   const std::vector<double>& t_values, const SolverConfig& cfg) {
    if (t_values.size() < 2) throw std::invalid_argument("boundary limit needs at least two t values");
    for (std::size_t i = 0; i < t_values.size(); ++i) {
        if (!(t_values[i] >= 0.0 && t_values[i] < 1.0)) throw std::invalid_argument("t values must lie in [0, 1)");
        if (i && !(t_values[i] > t_values[i - 1])) throw std::invalid_argument("t values must increase");
    }
    BoundaryLimitReport rep;
    const CVec nu = unit_normal(spec, p);
    const cplx pair = hermitian(curve.end_velocity, nu);
    rep.target = std::abs(pair) > 0.0 ? (2.0 / pair).real() : 0.0;
    std::vector<double> s;
    std::optional<GeodesicDisc> prev;
    std::string failure;
    for (double t : t_values) {
        const CVec z = curve.gamma(t);
        try {
            const ChlSolve cs = chl_solve(spec, p, z, cfg, prev ? &*prev : nullptr);
            const double om = poisson_from(cs.data, nu);
            rep.t.push_back(t);
            rep.products.push_back(std::abs(om) * (1.0 - t));
            s.push_back(1.0 - t);
            rep.largest_t = t;
            prev = cs.disc;
        } catch (const std::exception& e) {
            failure = e.what();
            break;
        }
    }
    if (rep.products.size() < 2) {
        std::ostringstream os;
        os << "largest t reached: " << rep.largest_t << "; " << failure;
        throw NumericalError("Poisson kernel evaluation failed near the boundary", os.str());
    }
    rep.limit = extrapolate_to_zero(s, rep.products);
    return rep;
}

GvpReport gvp_check(const ScalarField& omega, const ScalarField& green_fn, const CVec& z0, const CVec& p,
                    const CVec& nu, const std::vector<double>& steps) {
    if (steps.empty()) throw std::invalid_argument("gvp check needs at least one step");
    GvpReport rep;
    rep.steps = steps;
    rep.lhs = omega(z0);
    for (double h : steps) {
        if (!(h > 0.0)) throw std::invalid_argument("steps must be positive");
        rep.quotients.push_back(green_fn(p - h * nu) / h);
    }
    rep.rhs = extrapolate_to_zero(rep.steps, rep.quotients);
    rep.error = std::abs(rep.lhs - rep.rhs);
    return rep;
}

GvpReport gvp_check(const DomainSpec& spec, const CVec& z0, const CVec& p, const std::vector<double>& steps,
                    const SolverConfig& cfg) {
    const CVec nu = unit_normal(spec, p);
    return gvp_check([&](const CVec& z) { return poisson(spec, p, z, cfg); },
                     [&](const CVec& z) { return green(spec, z0, z, cfg); }, z0, p, nu, steps);
}

RMat real_hessian_fd(const ScalarField& f, const CVec& z, double h) {
    const RVec x = to_real(z);
    const auto d = x.size();
    RMat hs(d, d);
    const double f0 = f(z);
    auto at = [&](const RVec& y) { return f(from_real(y)); };
    // fourth-order stencils at step h
    for (Eigen::Index a = 0; a < d; ++a) {
        RVec e = RVec::Zero(d);
        e(a) = h;
        hs(a, a) = (-at(x + 2.0 * e) + 16.0 * at(x + e) - 30.0 * f0 + 16.0 * at(x - e) - at(x - 2.0 * e)) /
                   (12.0 * h * h);
    }
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = a + 1; b < d; ++b) {
            RVec ea = RVec::Zero(d), eb = RVec::Zero(d);
            ea(a) = h;
            eb(b) = h;
            auto cross = [&](double s) {
                return at(x + s * (ea + eb)) - at(x + s * (ea - eb)) - at(x - s * (ea - eb)) + at(x - s * (ea + eb));
            };
            const double v = (16.0 * cross(1.0) - cross(2.0)) / (48.0 * h * h);
            hs(a, b) = v;
            hs(b, a) = v;
        }
    return hs;
}

RVec real_gradient_fd(const ScalarField& f, const CVec& z, double h) {
    const RVec x = to_real(z);
    RVec g(x.size());
    auto at = [&](const RVec& y) { return f(from_real(y)); };
    for (Eigen::Index a = 0; a < x.size(); ++a) {
        RVec e = RVec::Zero(x.size());
        e(a) = h;
        g(a) = (8.0 * (at(x + e) - at(x - e)) - (at(x + 2.0 * e) - at(x - 2.0 * e))) / (12.0 * h);
    }
    return g;
}

HessianReport ma_check(const ScalarField& f, const CVec& z, double h, double psh_tol) {
    if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
    const RMat hs = real_hessian_fd(f, z, h);
    const int n = static_cast<int>(z.size());
    HessianReport rep;
    rep.levi.resize(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const double xx = hs(2 * j, 2 * k), yy = hs(2 * j + 1, 2 * k + 1);
            const double xy = hs(2 * j, 2 * k + 1), yx = hs(2 * j + 1, 2 * k);
            rep.levi(j, k) = cplx(0.25 * (xx + yy), 0.25 * (xy - yx));
        }
    Eigen::SelfAdjointEigenSolver<CMat> es(rep.levi, Eigen::EigenvaluesOnly);
    const RVec ev = es.eigenvalues();
    rep.min_eigenvalue = ev.minCoeff();
    const double tr = ev.sum();
    double det = 1.0;
    for (int j = 0; j < n; ++j) det *= ev(j);
    rep.degeneracy_ratio = std::abs(det) / std::pow(std::abs(tr) / n, n);
    rep.psh = rep.min_eigenvalue >= -psh_tol;
    return rep;
}

HessianReport ma_check_green(const DomainSpec& spec, const CVec& z0, const CVec& z, double h,
                             const SolverConfig& cfg) {
    if ((z - z0).norm() < 0.1) throw std::invalid_argument("point too close to the pole");
    return ma_check([&](const CVec& y) { return green(spec, z0, y, cfg); }, z, h);
}

HessianReport ma_check_poisson(const DomainSpec& spec, const CVec& p, const CVec& z, double h,
                               const SolverConfig& cfg) {
    if ((z - p).norm() < 0.1) throw std::invalid_argument("point too close to the pole");
    return ma_check([&](const CVec& y) { return poisson(spec, p, y, cfg); }, z, h);
}

double restricted_hessian_min(const ScalarField& f, const CVec& z, double h) {
    const RMat hs = real_hessian_fd(f, z, h);
    const RVec g = real_gradient_fd(f, z, h);
    if (g.norm() == 0.0) throw NumericalError("gradient vanishes; level set is singular");
    const RMat frame = tangent_frame(from_real(g));
    const RMat r = frame.transpose() * hs * frame;
    Eigen::SelfAdjointEigenSolver<RMat> es(r, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double horosphere_convexity_check(const DomainSpec& spec, const CVec& p, const CVec& z, double h,
                                  const SolverConfig& cfg) {
    if ((z - p).norm() < 0.1) throw std::invalid_argument("point too close to the pole");
    return restricted_hessian_min([&](const CVec& y) { return poisson(spec, p, y, cfg); }, z, h);
}

namespace {

double find_root(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi) {
    boost::uintmax_t iters = 100;
    auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); };
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (a + b);
}

}  // namespace

LevelSetSample levelset(const DomainSpec& spec, const ScalarField& omega, const CVec& p, double radius, int count,
                        std::uint64_t seed) {
    if (!(radius > 0.0)) throw std::invalid_argument("horosphere radius must be > 0");
    if (count < 0) throw std::invalid_argument("sample count must be >= 0");
    LevelSetSample out;
    if (count == 0) return out;
    const double level = -1.0 / radius;
    const CVec nu = normal(spec, p).normal;
    // Along the inward normal, from the pole to the far side.
    const double eps = 1e-9;
    const CVec far = boundary_along_ray(spec, CVec(p - eps * nu), CVec(-nu));
    const double s_far = (far - p).norm();
    auto on_normal = [&](double s) { return omega(CVec(p - s * nu)) - level; };
    double s_lo = 1e-3 * s_far;
    double f_lo = on_normal(s_lo);
    while (f_lo >= 0.0) {
        s_lo *= 0.5;
        if (s_lo < 1e-12) throw NumericalError("level set not reached near the pole");
        f_lo = on_normal(s_lo);
    }
    const double s_hi = s_far * (1.0 - 1e-6);
    const double f_hi = on_normal(s_hi);
    if (!(f_hi > 0.0)) throw NumericalError("level set not crossed along the normal");
    const double s_star = find_root(on_normal, s_lo, s_hi, f_lo, f_hi);
    out.anchor = p - 0.5 * s_star * nu;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const int n = spec.dimension();
    for (int i = 0; i < count; ++i) {
        CVec d(n);
        for (int j = 0; j < n; ++j) d(j) = cplx(gauss(rng), gauss(rng));
        d.normalize();
        const CVec edge = boundary_along_ray(spec, out.anchor, d);
        const double reach = (edge - out.anchor).norm() * (1.0 - 1e-6);
        auto along = [&](double s) { return omega(CVec(out.anchor + s * d)) - level; };
        const double f0 = along(0.0);
        const double f1 = along(reach);
        if (!(f0 < 0.0 && f1 > 0.0)) {
            ++out.skipped;
            continue;
        }
        const double s = find_root(along, 0.0, reach, f0, f1);
        const CVec z = out.anchor + s * d;
        out.points.push_back(z);
        out.residuals.push_back(std::abs(omega(z) - level));
    }
    return out;
}

LevelSetSample levelset(const DomainSpec& spec, const CVec& p, double radius, int count, std::uint64_t seed,
                        const SolverConfig& cfg) {
    return levelset(spec, [&](const CVec& z) { return poisson(spec, p, z, cfg); }, p, radius, count, seed);
}

}  // namespace plurikernel
