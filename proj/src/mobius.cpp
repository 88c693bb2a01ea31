#include "plurikernel/mobius.hpp"

#include <cmath>

namespace plurikernel {

Moebius Moebius::compose(const Moebius& in) const {
    return {alpha * in.alpha + beta * in.gamma, alpha * in.beta + beta * in.delta,
            gamma * in.alpha + delta * in.gamma, gamma * in.beta + delta * in.delta};
}

Moebius Moebius::fixing_one(double a, double b) {
    const cplx i(0.0, 1.0);
    const Moebius cayley{i, i, -1.0, 1.0};
    const Moebius cayley_inv{1.0, -i, 1.0, i};
    const Moebius affine{a, b, 0.0, 1.0};
    return cayley_inv.compose(affine.compose(cayley));
}

CVec MoebiusDisc::operator()(cplx zeta) const { return (A + zeta * B) / (1.0 - c * zeta); }

CVec MoebiusDisc::derivative(cplx zeta, int order) const {
    if (order == 0) return (*this)(zeta);
    // phi^(k) = k! c^{k-1} (c A + B) / (1 - c zeta)^{k+1}
    double fact = 1.0;
    for (int k = 2; k <= order; ++k) fact *= k;
    const cplx scale = fact * std::pow(c, order - 1) / std::pow(1.0 - c * zeta, order + 1);
    return scale * (c * A + B);
}

CMat MoebiusDisc::taylor(int degree) const {
    CMat out(dimension(), degree + 1);
    out.col(0) = A;
    const CVec lead = c * A + B;
    cplx cp = 1.0;
    for (int k = 1; k <= degree; ++k) {
        out.col(k) = cp * lead;
        cp *= c;
    }
    return out;
}

MoebiusDisc MoebiusDisc::compose(const Moebius& m) const {
    const cplx d0 = m.delta - c * m.beta;
    MoebiusDisc out;
    out.A = (A * m.delta + B * m.beta) / d0;
    out.B = (A * m.gamma + B * m.alpha) / d0;
    out.c = -(m.gamma - c * m.alpha) / d0;
    return out;
}

MoebiusDisc MoebiusDisc::scaled(const RVec& diag) const {
    MoebiusDisc out = *this;
    for (int j = 0; j < dimension(); ++j) {
        out.A(j) *= diag(j);
        out.B(j) *= diag(j);
    }
    return out;
}

namespace {

// P_a x and Q_a x = x - P_a x.
void split_along(const CVec& a, const CVec& x, CVec& par, CVec& perp) {
    const double a2 = a.squaredNorm();
    if (a2 == 0.0) {
        par = CVec::Zero(x.size());
    } else {
        par = hermitian(x, a) / a2 * a;
    }
    perp = x - par;
}

}  // namespace

CVec ball_involution(const CVec& a, const CVec& x) {
    CVec par, perp;
    split_along(a, x, par, perp);
    const double s = std::sqrt(1.0 - a.squaredNorm());
    return (a - par - s * perp) / (1.0 - hermitian(x, a));
}

MoebiusDisc ball_two_point_disc(const CVec& z, const CVec& w, double* t_out) {
    const CVec x = ball_involution(z, w);
    const double t = x.norm();
    const CVec u = x / t;
    CVec par, perp;
    split_along(z, u, par, perp);
    const double s = std::sqrt(1.0 - z.squaredNorm());
    MoebiusDisc d{z, -(par + s * perp), hermitian(u, z)};
    if (t_out) *t_out = t;
    return d;
}

MoebiusDisc ball_direction_disc(const CVec& z, const CVec& v, double* t_out) {
    CVec par, perp;
    split_along(z, v, par, perp);
    const double s = std::sqrt(1.0 - z.squaredNorm());
    const CVec u = (-(par / s + perp)).normalized();
    split_along(z, u, par, perp);
    MoebiusDisc d{z, -(par + s * perp), hermitian(u, z)};
    if (t_out) *t_out = (d.B + d.c * d.A).norm() / v.norm();
    return d;
}

MoebiusDisc ball_chl_disc(const CVec& p, const CVec& v) {
    const cplx v1 = hermitian(v, p);
    return MoebiusDisc{p - v1 * v, v1 * v, 0.0};
}

Moebius chl_reparametrization(const CVec& d1, const CVec& d2, const CVec& nu) {
    const double pair = hermitian(d1, nu).real();
    if (!(pair > 0.0)) throw NumericalError("disc is not transversal to the boundary at 1");
    const double lambda = pair / d1.squaredNorm();
    const double b = hermitian(d2, nu).imag() / pair;
    return Moebius::fixing_one(1.0 / lambda, b);
}

double ball_kobayashi_distance(const CVec& z, const CVec& w) {
    const double q = (1.0 - z.squaredNorm()) * (1.0 - w.squaredNorm()) / std::norm(1.0 - hermitian(w, z));
    return std::atanh(std::sqrt(std::max(0.0, 1.0 - q)));
}

double ball_kobayashi_metric(const CVec& z, const CVec& v) {
    const double d = 1.0 - z.squaredNorm();
    return std::sqrt(v.squaredNorm() / d + std::norm(hermitian(v, z)) / (d * d));
}

double ball_poisson(const CVec& p, const CVec& z) {
    return -(1.0 - z.squaredNorm()) / std::norm(1.0 - hermitian(z, p));
}

double ball_green(const CVec& z0, const CVec& z) {
    const double q = (1.0 - z.squaredNorm()) * (1.0 - z0.squaredNorm()) / std::norm(1.0 - hermitian(z, z0));
    return 0.5 * std::log1p(-q);
}

}  // namespace plurikernel
