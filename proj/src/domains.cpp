#include "plurikernel/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/tools/toms748_solve.hpp>

namespace plurikernel {

namespace {

double ipow(double x, int e) {
    double v = 1.0;
    for (int i = 0; i < e; ++i) v *= x;
    return v;
}

double bump_value(const std::vector<Monomial>& bump, const RVec& x) {
    double v = 0.0;
    for (const auto& m : bump) {
        double t = m.coef;
        for (Eigen::Index i = 0; i < x.size(); ++i) t *= ipow(x(i), m.powers[i]);
        v += t;
    }
    return v;
}

RVec bump_gradient(const std::vector<Monomial>& bump, const RVec& x) {
    RVec g = RVec::Zero(x.size());
    for (const auto& m : bump) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (m.powers[i] == 0) continue;
            double t = m.coef * m.powers[i] * ipow(x(i), m.powers[i] - 1);
            for (Eigen::Index l = 0; l < x.size(); ++l)
                if (l != i) t *= ipow(x(l), m.powers[l]);
            g(i) += t;
        }
    }
    return g;
}

RMat bump_hessian(const std::vector<Monomial>& bump, const RVec& x) {
    const auto d = x.size();
    RMat h = RMat::Zero(d, d);
    for (const auto& m : bump) {
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index k = i; k < d; ++k) {
                std::vector<int> e = m.powers;
                double t = m.coef;
                t *= e[i];
                if (e[i] == 0) continue;
                e[i] -= 1;
                t *= e[k];
                if (e[k] == 0) continue;
                e[k] -= 1;
                for (Eigen::Index l = 0; l < d; ++l) t *= ipow(x(l), e[l]);
                h(i, k) += t;
                if (k != i) h(k, i) += t;
            }
        }
    }
    return h;
}

}  // namespace

DomainSpec::DomainSpec(DomainKind kind, std::vector<double> axes, double eps,
                       std::vector<Monomial> bump)
    : kind_(kind), axes_(std::move(axes)), eps_(eps), bump_(std::move(bump)) {
    const int n = dimension();
    if (n < 1 || n > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
    for (double a : axes_)
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("ellipsoid axis weights must be positive");
    if (!(eps_ >= 0.0) || !std::isfinite(eps_))
        throw std::invalid_argument("perturbation eps must be >= 0");
    for (const auto& m : bump_) {
        if (static_cast<int>(m.powers.size()) != 2 * n)
            throw std::invalid_argument("bump monomial needs 2n exponents");
        for (int e : m.powers)
            if (e < 0 || e > 12) throw std::invalid_argument("bump exponents must lie in 0..12");
        if (!std::isfinite(m.coef)) throw std::invalid_argument("bump coefficient not finite");
    }
}

DomainSpec DomainSpec::ball(int n) {
    return DomainSpec(DomainKind::ball, std::vector<double>(std::max(n, 0), 1.0), 0.0, {});
}

DomainSpec DomainSpec::ellipsoid(std::vector<double> axes) {
    return DomainSpec(DomainKind::ellipsoid, std::move(axes), 0.0, {});
}

DomainSpec DomainSpec::perturbed_ellipsoid(std::vector<double> axes, double eps,
                                           std::vector<Monomial> bump) {
    return DomainSpec(DomainKind::perturbed_ellipsoid, std::move(axes), eps, std::move(bump));
}

double DomainSpec::r(const CVec& z) const {
    double v = -1.0;
    for (int j = 0; j < dimension(); ++j) v += axes_[j] * std::norm(z(j));
    if (!is_quadric()) v += eps_ * bump_value(bump_, to_real(z));
    return v;
}

RVec DomainSpec::real_grad(const CVec& z) const {
    RVec g(2 * dimension());
    for (int j = 0; j < dimension(); ++j) {
        g(2 * j) = 2.0 * axes_[j] * z(j).real();
        g(2 * j + 1) = 2.0 * axes_[j] * z(j).imag();
    }
    if (!is_quadric()) g += eps_ * bump_gradient(bump_, to_real(z));
    return g;
}

CVec DomainSpec::grad(const CVec& z) const {
    const RVec g = real_grad(z);
    CVec out(dimension());
    for (int j = 0; j < dimension(); ++j) out(j) = cplx(g(2 * j), -g(2 * j + 1)) * 0.5;
    return out;
}

RMat DomainSpec::real_hessian(const CVec& z) const {
    RMat h = RMat::Zero(2 * dimension(), 2 * dimension());
    for (int j = 0; j < dimension(); ++j) {
        h(2 * j, 2 * j) = 2.0 * axes_[j];
        h(2 * j + 1, 2 * j + 1) = 2.0 * axes_[j];
    }
    if (!is_quadric()) h += eps_ * bump_hessian(bump_, to_real(z));
    return h;
}

DomainSpec DomainSpec::homotopy_member(double sigma, double s) const {
    std::vector<double> axes(axes_.size());
    for (std::size_t j = 0; j < axes.size(); ++j)
        axes[j] = axes_[j] * ((1.0 - s) / (sigma * sigma) + s);
    if (is_quadric() && s == 1.0) return *this;
    return DomainSpec(DomainKind::perturbed_ellipsoid, std::move(axes), s * eps_, bump_);
}

DomainSpec DomainSpec::quadric_part() const {
    if (kind_ == DomainKind::ball) return *this;
    return ellipsoid(axes_);
}

RMat tangent_frame(const CVec& nu) {
    const RVec n = to_real(nu).normalized();
    const auto d = n.size();
    // Householder reflection sending e_0 to n; its remaining columns span n-perp.
    RVec w = n;
    w(0) -= 1.0;
    RMat q = RMat::Identity(d, d);
    if (w.norm() > 1e-14) q -= 2.0 * w * w.transpose() / w.squaredNorm();
    RMat basis(d, d);
    basis.col(0) = n;
    for (Eigen::Index i = 1; i < d; ++i) basis.col(i) = q.col(i);
    if (basis.determinant() < 0.0) basis.col(d - 1) *= -1.0;
    return basis.rightCols(d - 1);
}

CVec unit_normal(const DomainSpec& spec, const CVec& p) {
    const CVec g = spec.grad(p);
    return g.conjugate() / g.norm();
}

BoundaryPoint normal(const DomainSpec& spec, const CVec& p, double tol) {
    if (p.size() != spec.dimension()) throw std::invalid_argument("point dimension mismatch");
    if (std::abs(spec.r(p)) > tol) throw std::invalid_argument("point is not on the boundary");
    BoundaryPoint bp;
    bp.p = p;
    bp.normal = unit_normal(spec, p);
    bp.frame = tangent_frame(bp.normal);
    return bp;
}

CVec boundary_along_ray(const DomainSpec& spec, const CVec& origin, const CVec& direction) {
    if (direction.norm() == 0.0) throw std::invalid_argument("zero ray direction");
    if (!(spec.r(origin) < 0.0)) throw std::invalid_argument("ray origin is not interior");
    const CVec d = direction.normalized();
    auto f = [&](double s) { return spec.r(origin + s * d); };
    double hi = 1.0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw NumericalError("domain appears unbounded along ray");
    }
    boost::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)); };
    auto [lo_s, hi_s] = boost::math::tools::toms748_solve(f, 0.0, hi, f(0.0), f(hi), tol, iters);
    const double s = std::abs(f(lo_s)) < std::abs(f(hi_s)) ? lo_s : hi_s;
    return origin + s * d;
}

CVec boundary_along_ray(const DomainSpec& spec, const CVec& direction) {
    return boundary_along_ray(spec, CVec::Zero(spec.dimension()), direction);
}

ValidationReport validate(const DomainSpec& spec, int samples, std::uint64_t seed) {
    ValidationReport rep;
    rep.samples = samples;
    const int n = spec.dimension();
    if (!(spec.r(CVec::Zero(n)) < 0.0)) {
        rep.message = "origin is not interior";
        return rep;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    rep.min_hessian_eigenvalue = std::numeric_limits<double>::infinity();
    // Coordinate axes first: perturbation extremes often sit there.
    for (int i = 0; i < samples; ++i) {
        CVec d(n);
        if (i < 4 * n) {
            d.setZero();
            const int axis = (i / 2) % (2 * n);
            const double sign = (i % 2 == 0) ? 1.0 : -1.0;
            if (axis % 2 == 0) d(axis / 2) = sign;
            else d(axis / 2) = cplx(0.0, sign);
        } else {
            for (int j = 0; j < n; ++j) d(j) = cplx(gauss(rng), gauss(rng));
        }
        CVec p;
        try {
            p = boundary_along_ray(spec, d);
        } catch (const std::exception& e) {
            rep.message = e.what();
            rep.min_hessian_eigenvalue = -std::numeric_limits<double>::infinity();
            return rep;
        }
        rep.max_boundary_residual = std::max(rep.max_boundary_residual, std::abs(spec.r(p)));
        Eigen::SelfAdjointEigenSolver<RMat> es(spec.real_hessian(p), Eigen::EigenvaluesOnly);
        rep.min_hessian_eigenvalue = std::min(rep.min_hessian_eigenvalue, es.eigenvalues()(0));
    }
    rep.ok = rep.min_hessian_eigenvalue > 0.0;
    if (!rep.ok) rep.message = "real Hessian not positive definite on the boundary";
    return rep;
}

CVec to_ball(const DomainSpec& spec, const CVec& z) {
    CVec w(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) w(j) = std::sqrt(spec.axes()[j]) * z(j);
    return w;
}

CVec from_ball(const DomainSpec& spec, const CVec& w) {
    CVec z(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) z(j) = w(j) / std::sqrt(spec.axes()[j]);
    return z;
}

}  // namespace plurikernel
