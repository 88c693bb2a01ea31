#include "plurikernel/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "stationary_system.hpp"

namespace plurikernel {

using detail::Regime;
using detail::StationarySystem;

FourierGrid SolverConfig::fourier() const {
    FourierGrid g = grid == 0 ? FourierGrid::for_degree(modes) : FourierGrid{modes, grid};
    g.validate();
    return g;
}

void SolverConfig::validate() const {
    if (modes < 1) throw std::invalid_argument("modes must be >= 1");
    if (!(newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(min_damping > 0.0 && min_damping <= 1.0))
        throw std::invalid_argument("min_damping must lie in (0, 1]");
    if (homotopy_steps < 1) throw std::invalid_argument("homotopy_steps must be >= 1");
    if (!(initial_perturbation >= 0.0)) throw std::invalid_argument("initial_perturbation must be >= 0");
    fourier();
}

namespace {

RVec sqrt_axes(const DomainSpec& spec) {
    RVec d(spec.dimension());
    for (int j = 0; j < spec.dimension(); ++j) d(j) = std::sqrt(spec.axes()[j]);
    return d;
}

void require_interior(const DomainSpec& spec, const CVec& z, const char* name) {
    if (z.size() != spec.dimension())
        throw std::invalid_argument(std::string(name) + ": dimension mismatch");
    if (!z.allFinite()) throw std::invalid_argument(std::string(name) + ": not finite");
    if (!(spec.r(z) < 0.0)) throw std::invalid_argument(std::string(name) + " is not an interior point");
}

void require_boundary(const DomainSpec& spec, const CVec& p) {
    if (p.size() != spec.dimension()) throw std::invalid_argument("p: dimension mismatch");
    if (!(std::abs(spec.r(p)) <= 1e-8)) throw std::invalid_argument("p is not on the boundary");
}

// mu and phi~ from the boundary trace of phi, using the identity phi~ . phi' = 1 on the circle.
struct DualData {
    AnalyticDisc phi_tilde;
    RealTrigPoly mu;
    RealTrigPoly log_mu;
};

DualData dual_from_trace(const DomainSpec& spec, const AnalyticDisc& phi, const FourierGrid& grid,
                         const RVec* log_mu_samples) {
    const int m_size = grid.size;
    const CMat bv = phi.boundary_values(m_size);
    const CMat dv = phi.boundary_derivative(m_size);
    std::vector<double> mu(m_size), lmu(m_size);
    CMat g(spec.dimension(), m_size);
    for (int m = 0; m < m_size; ++m) {
        const cplx e = std::polar(1.0, grid.angle(m));
        const CVec dr = spec.grad(bv.col(m));
        if (log_mu_samples) {
            lmu[m] = (*log_mu_samples)(m);
            mu[m] = std::exp(lmu[m]);
        } else {
            const double pair = (e * bilinear(dr, dv.col(m))).real();
            mu[m] = 1.0 / pair;
            lmu[m] = std::log(std::abs(mu[m]));
        }
        g.col(m) = e * mu[m] * dr;
    }
    DualData out;
    out.phi_tilde = holomorphic_split(analyze(g, grid)).disc;
    out.mu = RealTrigPoly::from_samples(mu, grid.degree);
    out.log_mu = RealTrigPoly::from_samples(lmu, grid.degree);
    return out;
}

GeodesicDisc assemble(const StationarySystem& sys, const detail::NewtonResult& nr, Parametrization meta,
                      int homotopy_steps) {
    GeodesicDisc g;
    g.spec = sys.spec();
    g.grid = sys.grid();
    g.phi = AnalyticDisc(sys.coefficients(nr.x));
    const RealTrigPoly q = sys.log_mu(nr.x);
    const RVec qv = q.samples(g.grid.size);
    DualData dd = dual_from_trace(g.spec, g.phi, g.grid, &qv);
    g.phi_tilde = std::move(dd.phi_tilde);
    g.mu = std::move(dd.mu);
    g.log_mu = q;
    g.meta = std::move(meta);
    g.residuals = residual_report(g);
    g.residuals.newton_residual = nr.residual;
    g.residuals.iterations = nr.iterations;
    g.residuals.homotopy_steps = homotopy_steps;
    g.residuals.converged = nr.converged;
    return g;
}

// Unknown vector for a Moebius-form initial guess on a quadric member.
RVec initial_vector(const StationarySystem& sys, const MoebiusDisc& disc) {
    const AnalyticDisc phi(disc.taylor(sys.grid().degree));
    const DualData dd = dual_from_trace(sys.spec(), phi, sys.grid(), nullptr);
    RVec x = RVec::Zero(sys.unknowns());
    x.head(sys.extras_offset()) = sys.pack(phi.coeffs(), dd.log_mu);
    return x;
}

void perturb(RVec& x, const StationarySystem& sys, const SolverConfig& cfg) {
    if (cfg.initial_perturbation == 0.0) return;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss;
    const int deg = sys.grid().degree;
    for (int j = 0; j < sys.n(); ++j)
        for (int k = 0; k <= deg; ++k) {
            const double s = cfg.initial_perturbation / ((1.0 + k) * (1.0 + k));
            const int col = 2 * (j * (deg + 1) + k);
            x(col) += s * gauss(rng);
            x(col + 1) += s * gauss(rng);
        }
    const int off = sys.coeff_count();
    for (int i = 0; i < sys.q_count(); ++i) {
        const int k = (i + 1) / 2;
        x(off + i) += cfg.initial_perturbation / ((1.0 + k) * (1.0 + k)) * gauss(rng);
    }
}

std::string describe(const detail::NewtonResult& nr, double s) {
    std::ostringstream os;
    os << "residual=" << nr.residual << " iterations=" << nr.iterations << " homotopy_s=" << s;
    return os.str();
}

// Closed-form initializer on a quadric member: disc in Moebius form plus regime extras.
struct Start {
    MoebiusDisc disc;
    RVec extras;
};

Start quadric_start(const DomainSpec& quad, const Regime& rg) {
    const RVec sq = sqrt_axes(quad);
    const RVec inv = sq.cwiseInverse();
    auto up = [&](const CVec& z) -> CVec { return (sq.cast<cplx>().array() * z.array()).matrix(); };
    Start st;
    switch (rg.kind) {
        case Regime::Kind::two_point:
        case Regime::Kind::two_point_boundary: {
            double t = 0.0;
            st.disc = ball_two_point_disc(up(rg.z), up(rg.w), &t).scaled(inv);
            if (rg.kind == Regime::Kind::two_point) st.extras = RVec::Constant(1, t);
            break;
        }
        case Regime::Kind::two_point_balanced: {
            const CVec a = up(rg.z), b = up(rg.w);
            const CVec u = (b - a).normalized();
            const CVec foot = a - hermitian(a, u) * u;
            const double len = std::sqrt(1.0 - foot.squaredNorm());
            MoebiusDisc line{foot, len * u, 0.0};
            st.disc = line.scaled(inv);
            const cplx za = hermitian(a, u) / len;
            st.extras = RVec(3);
            st.extras << za.real(), za.imag(), (b - a).norm() / len;
            break;
        }
        case Regime::Kind::direction: {
            double t = 0.0;
            st.disc = ball_direction_disc(up(rg.z), up(rg.v), &t).scaled(inv);
            st.extras = RVec::Constant(1, t);
            break;
        }
        case Regime::Kind::chl: {
            const CVec vb = up(rg.v).normalized();
            CVec pb = up(rg.p);
            pb /= pb.norm();
            MoebiusDisc d = ball_chl_disc(pb, vb).scaled(inv);
            const Moebius m = chl_reparametrization(d.derivative(1.0, 1), d.derivative(1.0, 2), rg.nu);
            st.disc = d.compose(m);
            break;
        }
        case Regime::Kind::chl_through: {
            CVec pb = up(rg.p);
            pb /= pb.norm();
            double t = 0.0;
            MoebiusDisc d = ball_two_point_disc(up(rg.z), pb, &t).scaled(inv);
            const Moebius m = chl_reparametrization(d.derivative(1.0, 1), d.derivative(1.0, 2), rg.nu);
            st.disc = d.compose(m);
            const cplx zeta = m.inverse()(0.0);
            st.extras = RVec(2);
            st.extras << zeta.real(), zeta.imag();
            break;
        }
    }
    return st;
}

// Boundary data of the regime carried over to a homotopy member.
Regime project_regime(const Regime& target, const DomainSpec& target_spec, const DomainSpec& member) {
    Regime rg = target;
    if (target.p.size() == 0) return rg;
    rg.p = boundary_along_ray(member, target.p);
    rg.nu = unit_normal(member, rg.p);
    if (target.v.size() != 0 && target.kind == Regime::Kind::chl) {
        const CVec nu_t = unit_normal(target_spec, target.p);
        const cplx a = hermitian(target.v, nu_t);
        const CVec tang = target.v - a * nu_t;
        rg.v = (a * rg.nu + tang - hermitian(tang, rg.nu) * rg.nu).normalized();
    }
    return rg;
}

double homotopy_sigma(const DomainSpec& spec, const Regime& rg) {
    double q = 0.0;
    auto quad = [&](const CVec& z) {
        double v = 0.0;
        for (int j = 0; j < spec.dimension(); ++j) v += spec.axes()[j] * std::norm(z(j));
        return v;
    };
    if (rg.z.size()) q = std::max(q, quad(rg.z));
    if (rg.w.size() && rg.kind != Regime::Kind::two_point_boundary) q = std::max(q, quad(rg.w));
    return std::max(1.0, std::sqrt(q / 0.9));
}

GeodesicDisc run(const DomainSpec& spec, Regime rg, const SolverConfig& cfg, Parametrization meta,
                 const RVec* warm_x) {
    cfg.validate();
    const FourierGrid grid = cfg.fourier();
    const int rg_extras = rg.extras();
    auto finish = [&](const StationarySystem& sys, const detail::NewtonResult& nr, int steps) {
        Parametrization out = meta;
        const int xo = sys.extras_offset();
        if (auto* tp = std::get_if<TwoPointParams>(&out)) {
            tp->t = rg.kind == Regime::Kind::two_point ? nr.x(xo) : 1.0;
        } else if (auto* dp = std::get_if<DirectionParams>(&out)) {
            dp->t = nr.x(xo);
        } else if (auto* cp = std::get_if<ChlThroughParams>(&out)) {
            cp->zeta = cplx(nr.x(xo), nr.x(xo + 1));
        } else if (auto* pp = std::get_if<PairParams>(&out)) {
            pp->zeta_z = cplx(nr.x(xo), nr.x(xo + 1));
            pp->zeta_w = pp->zeta_z + nr.x(xo + 2);
        }
        return assemble(sys, nr, out, steps);
    };

    // On quadric domains the closed-form start is exact; warm starts only help elsewhere.
    if (spec.is_quadric()) {
        const StationarySystem sys(spec, grid, rg);
        const Start st = quadric_start(spec, rg);
        RVec x = initial_vector(sys, st.disc);
        if (rg_extras) x.tail(rg_extras) = st.extras;
        perturb(x, sys, cfg);
        const auto nr = detail::gauss_newton(sys, x, cfg.newton_tol, cfg.max_iter, cfg.min_damping);
        if (nr.converged) return finish(sys, nr, 0);
        if (warm_x && warm_x->size() == sys.unknowns()) {
            const auto nw = detail::gauss_newton(sys, *warm_x, cfg.newton_tol, cfg.max_iter, cfg.min_damping);
            if (nw.converged) return finish(sys, nw, 0);
        }
        throw NumericalError("geodesic solve did not converge", describe(nr, 1.0));
    }

    if (warm_x) {
        const StationarySystem sys(spec, grid, rg);
        if (warm_x->size() == sys.unknowns()) {
            const auto nr = detail::gauss_newton(sys, *warm_x, cfg.newton_tol, cfg.max_iter, cfg.min_damping);
            if (nr.converged) return finish(sys, nr, 0);
        }
    }

    // Homotopy from an ellipsoid large enough to contain the interior data.
    const double sigma = homotopy_sigma(spec, rg);
    const DomainSpec base = spec.homotopy_member(sigma, 0.0).quadric_part();
    const Regime rg0 = project_regime(rg, spec, base);
    RVec x;
    {
        const StationarySystem sys(base, grid, rg0);
        const Start st = quadric_start(base, rg0);
        x = initial_vector(sys, st.disc);
        if (rg_extras) x.tail(rg_extras) = st.extras;
        perturb(x, sys, cfg);
        const auto nr = detail::gauss_newton(sys, x, cfg.newton_tol, cfg.max_iter, cfg.min_damping);
        if (!nr.converged)
            throw NumericalError("geodesic solve did not converge on the homotopy base", describe(nr, 0.0));
        x = nr.x;
    }
    double s = 0.0;
    double ds = 1.0 / cfg.homotopy_steps;
    int steps = 0;
    const double min_ds = ds / 64.0;
    while (true) {
        const double s_next = std::min(1.0, s + ds);
        const DomainSpec member = s_next == 1.0 ? spec : spec.homotopy_member(sigma, s_next);
        const Regime rgs = s_next == 1.0 ? rg : project_regime(rg, spec, member);
        const StationarySystem sys(member, grid, rgs);
        // Intermediate members only need a rough solve; the last one gets the full tolerance.
        const double tol = s_next == 1.0 ? cfg.newton_tol : std::max(cfg.newton_tol, 1e-8);
        const auto nr = detail::gauss_newton(sys, x, tol, cfg.max_iter, cfg.min_damping);
        ++steps;
        if (nr.converged) {
            x = nr.x;
            s = s_next;
            if (s == 1.0) return finish(sys, nr, steps);
            ds = std::min(ds * 1.5, 1.0 / cfg.homotopy_steps);
        } else {
            ds *= 0.5;
            if (ds < min_ds) throw NumericalError("homotopy exhausted", describe(nr, s_next));
        }
    }
}

Regime interior_pair(const CVec& z, const CVec& w) {
    Regime rg;
    rg.kind = Regime::Kind::two_point;
    rg.z = z;
    rg.w = w;
    return rg;
}

// Unknown vector from a previous solution with the same domain, grid and parametrization kind.
std::optional<RVec> warm_vector(const DomainSpec& spec, const SolverConfig& cfg, const Regime& rg,
                                const GeodesicDisc* warm) {
    if (!warm || !(warm->spec == spec)) return std::nullopt;
    const FourierGrid grid = cfg.fourier();
    if (warm->grid.degree != grid.degree || warm->grid.size != grid.size) return std::nullopt;
    if (warm->log_mu.degree() != grid.degree) return std::nullopt;
    RVec extras;
    using K = Regime::Kind;
    if (const auto* tp = std::get_if<TwoPointParams>(&warm->meta); tp && rg.kind == K::two_point) {
        extras = RVec::Constant(1, tp->t);
    } else if (const auto* dp = std::get_if<DirectionParams>(&warm->meta); dp && rg.kind == K::direction) {
        extras = RVec::Constant(1, dp->t);
    } else if (std::holds_alternative<ChlParams>(warm->meta) && rg.kind == K::chl) {
        extras = RVec(0);
    } else if (const auto* cp = std::get_if<ChlThroughParams>(&warm->meta); cp && rg.kind == K::chl_through) {
        extras = RVec(2);
        extras << cp->zeta.real(), cp->zeta.imag();
    } else if (const auto* pp = std::get_if<PairParams>(&warm->meta); pp && rg.kind == K::two_point_balanced) {
        extras = RVec(3);
        extras << pp->zeta_z.real(), pp->zeta_z.imag(), (pp->zeta_w - pp->zeta_z).real();
    } else {
        return std::nullopt;
    }
    const StationarySystem sys(spec, grid, rg);
    RVec x(sys.unknowns());
    x.head(sys.extras_offset()) = sys.pack(warm->phi.coeffs(), warm->log_mu);
    x.tail(extras.size()) = extras;
    return x;
}

GeodesicDisc run_warm(const DomainSpec& spec, const Regime& rg, const SolverConfig& cfg, Parametrization meta,
                      const GeodesicDisc* warm) {
    const auto wx = warm_vector(spec, cfg, rg, warm);
    return run(spec, rg, cfg, std::move(meta), wx ? &*wx : nullptr);
}

}  // namespace

void require_in_lp(const DomainSpec& spec, const CVec& p, const CVec& v) {
    require_boundary(spec, p);
    if (v.size() != spec.dimension()) throw std::invalid_argument("v: dimension mismatch");
    if (std::abs(v.norm() - 1.0) > 1e-10) throw std::invalid_argument("v must be a unit vector");
    const cplx pair = hermitian(v, unit_normal(spec, p));
    if (std::abs(pair.imag()) > 1e-10) throw std::invalid_argument("<v, nu_p> must be real");
    if (pair.real() < 1e-8) throw std::invalid_argument("v is tangential or points inward");
}

GeodesicDisc solve_two_point(const DomainSpec& spec, const CVec& z, const CVec& w, const SolverConfig& cfg,
                             const GeodesicDisc* warm) {
    require_interior(spec, z, "z");
    require_interior(spec, w, "w");
    if ((z - w).norm() < 1e-12) throw std::invalid_argument("z and w coincide");
    return run_warm(spec, interior_pair(z, w), cfg, TwoPointParams{z, w, 0.0}, warm);
}

GeodesicDisc solve_pair(const DomainSpec& spec, const CVec& z, const CVec& w, const SolverConfig& cfg,
                        const GeodesicDisc* warm) {
    require_interior(spec, z, "z");
    require_interior(spec, w, "w");
    if ((z - w).norm() < 1e-12) throw std::invalid_argument("z and w coincide");
    Regime rg = interior_pair(z, w);
    rg.kind = Regime::Kind::two_point_balanced;
    rg.weights = Eigen::Map<const RVec>(spec.axes().data(), spec.dimension());
    return run_warm(spec, rg, cfg, PairParams{z, w, 0.0, 0.0}, warm);
}

namespace {

// Disc automorphism psi(x) = (x - a) / (1 - conj(a) x).
cplx recenter(cplx a, cplx x) { return (x - a) / (1.0 - std::conj(a) * x); }

}  // namespace

double pair_parameter(const GeodesicDisc& pair) {
    const auto& pp = std::get<PairParams>(pair.meta);
    return std::abs(recenter(pp.zeta_z, pp.zeta_w));
}

CVec pair_spherical_point(const GeodesicDisc& pair) {
    const auto& pp = std::get<PairParams>(pair.meta);
    const CVec d = pair.phi.eval(pp.zeta_z, 1);
    return recenter(pp.zeta_z, pp.zeta_w) * d / d.norm();
}

GeodesicDisc solve_direction(const DomainSpec& spec, const CVec& z, const CVec& v, const SolverConfig& cfg,
                             const GeodesicDisc* warm) {
    require_interior(spec, z, "z");
    if (v.size() != spec.dimension()) throw std::invalid_argument("v: dimension mismatch");
    if (!(v.norm() > 0.0) || !v.allFinite()) throw std::invalid_argument("direction must be nonzero");
    Regime rg;
    rg.kind = Regime::Kind::direction;
    rg.z = z;
    rg.v = v;
    return run_warm(spec, rg, cfg, DirectionParams{z, v, 0.0}, warm);
}

GeodesicDisc solve_chl(const DomainSpec& spec, const CVec& p, const CVec& v, const SolverConfig& cfg,
                       const GeodesicDisc* warm) {
    require_in_lp(spec, p, v);
    Regime rg;
    rg.kind = Regime::Kind::chl;
    rg.p = p;
    rg.v = v;
    rg.nu = unit_normal(spec, p);
    return run_warm(spec, rg, cfg, ChlParams{p, v}, warm);
}

GeodesicDisc solve_chl_through(const DomainSpec& spec, const CVec& p, const CVec& z, const SolverConfig& cfg,
                               const GeodesicDisc* warm) {
    require_boundary(spec, p);
    require_interior(spec, z, "z");
    Regime rg;
    rg.kind = Regime::Kind::chl_through;
    rg.p = p;
    rg.z = z;
    rg.nu = unit_normal(spec, p);
    return run_warm(spec, rg, cfg, ChlThroughParams{p, z, 0.0}, warm);
}

GeodesicDisc geodesic_from_coefficients(const DomainSpec& spec, FourierGrid grid, const CMat& coeffs,
                                        const RealTrigPoly& log_mu, Parametrization meta) {
    grid.validate();
    if (coeffs.rows() != spec.dimension()) throw std::invalid_argument("coefficients: dimension mismatch");
    if (coeffs.cols() != grid.degree + 1) throw std::invalid_argument("coefficients: degree mismatch");
    if (log_mu.degree() != grid.degree || static_cast<int>(log_mu.b.size()) != grid.degree)
        throw std::invalid_argument("log mu: degree mismatch");
    GeodesicDisc g;
    g.spec = spec;
    g.grid = grid;
    g.phi = AnalyticDisc(coeffs);
    const RVec qv = log_mu.samples(grid.size);
    DualData dd = dual_from_trace(spec, g.phi, grid, &qv);
    g.phi_tilde = std::move(dd.phi_tilde);
    g.mu = std::move(dd.mu);
    g.log_mu = log_mu;
    g.meta = std::move(meta);
    g.residuals = residual_report(g);
    g.residuals.converged = g.residuals.boundary_defect <= 1e-8 && g.residuals.dual_defect <= 1e-8;
    return g;
}

GeodesicDisc geodesic_from_moebius(const DomainSpec& spec, const MoebiusDisc& disc, Parametrization meta,
                                   FourierGrid grid) {
    grid.validate();
    GeodesicDisc g;
    g.spec = spec;
    g.grid = grid;
    g.phi = AnalyticDisc(disc.taylor(grid.degree));
    DualData dd = dual_from_trace(spec, g.phi, grid, nullptr);
    g.phi_tilde = std::move(dd.phi_tilde);
    g.mu = std::move(dd.mu);
    g.log_mu = std::move(dd.log_mu);
    g.meta = std::move(meta);
    g.residuals = residual_report(g);
    g.residuals.converged = g.residuals.boundary_defect <= 1e-8 && g.residuals.dual_defect <= 1e-8;
    return g;
}

namespace {

void require_ball(const DomainSpec& spec) {
    if (spec.kind() != DomainKind::ball) throw std::invalid_argument("closed-form geodesics need the ball");
}

}  // namespace

GeodesicDisc ball_geodesic_two_point(const DomainSpec& spec, const CVec& z, const CVec& w, FourierGrid grid) {
    require_ball(spec);
    require_interior(spec, z, "z");
    require_interior(spec, w, "w");
    if ((z - w).norm() < 1e-12) throw std::invalid_argument("z and w coincide");
    double t = 0.0;
    const MoebiusDisc d = ball_two_point_disc(z, w, &t);
    return geodesic_from_moebius(spec, d, TwoPointParams{z, w, t}, grid);
}

GeodesicDisc ball_geodesic_direction(const DomainSpec& spec, const CVec& z, const CVec& v, FourierGrid grid) {
    require_ball(spec);
    require_interior(spec, z, "z");
    if (!(v.norm() > 0.0)) throw std::invalid_argument("direction must be nonzero");
    double t = 0.0;
    const MoebiusDisc d = ball_direction_disc(z, v, &t);
    return geodesic_from_moebius(spec, d, DirectionParams{z, v, t}, grid);
}

GeodesicDisc ball_geodesic_chl(const DomainSpec& spec, const CVec& p, const CVec& v, FourierGrid grid) {
    require_ball(spec);
    require_in_lp(spec, p, v);
    return geodesic_from_moebius(spec, ball_chl_disc(p, v), ChlParams{p, v}, grid);
}

ResidualReport residual_report(const GeodesicDisc& g) {
    ResidualReport rep;
    const int m_size = g.grid.size;
    const CMat bv = g.phi.boundary_values(m_size);
    const CMat dv = g.phi.boundary_derivative(m_size);
    const CMat tv = g.phi_tilde.boundary_values(m_size);
    const RVec qv = g.log_mu.samples(m_size);
    rep.mu_min = std::numeric_limits<double>::infinity();
    for (int m = 0; m < m_size; ++m) {
        const CVec z = bv.col(m);
        rep.boundary_defect = std::max(rep.boundary_defect, std::abs(g.spec.r(z)));
        const double mu = std::exp(qv(m));
        rep.mu_min = std::min(rep.mu_min, mu);
        const CVec expect = std::polar(mu, g.grid.angle(m)) * g.spec.grad(z);
        rep.dual_defect = std::max(rep.dual_defect, (tv.col(m) - expect).norm());
        rep.norm_defect = std::max(rep.norm_defect, std::abs(bilinear(tv.col(m), dv.col(m)) - 1.0));
    }
    rep.norm_defect = std::max(rep.norm_defect,
                               std::abs(bilinear(g.phi_tilde.eval(0.0), g.phi.eval(0.0, 1)) - 1.0));
    const int deg = g.phi.degree();
    for (int k = deg - deg / 4; k <= deg; ++k)
        rep.spectral_tail = std::max(rep.spectral_tail, g.phi.coeffs().col(k).norm());
    rep.under_resolved = rep.spectral_tail > 1e-10;
    return rep;
}

}  // namespace plurikernel
