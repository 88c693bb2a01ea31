#pragma once

// Closed-form geodesics of the ball (and of ellipsoids through the axis
// scaling) in the form phi(zeta) = (A + zeta B) / (1 - c zeta), |c| < 1.
// Every complex geodesic of the ball has this shape, and the family is closed
// under precomposition with disc automorphisms.

#include "plurikernel/common.hpp"

namespace plurikernel {

/// Scalar Moebius map zeta -> (alpha zeta + beta) / (gamma zeta + delta).
struct Moebius {
    cplx alpha{1.0}, beta{0.0}, gamma{0.0}, delta{1.0};

    cplx operator()(cplx z) const { return (alpha * z + beta) / (gamma * z + delta); }
    cplx derivative(cplx z) const {
        const cplx den = gamma * z + delta;
        return (alpha * delta - beta * gamma) / (den * den);
    }
    Moebius inverse() const { return {delta, -beta, -gamma, alpha}; }
    Moebius compose(const Moebius& inner) const;  ///< this o inner

    /// Disc automorphism fixing 1 conjugate to w -> a w + b on the upper half plane
    /// via w = i (1 + zeta) / (1 - zeta). Its derivative at 1 is 1/a.
    static Moebius fixing_one(double a, double b);
};

struct MoebiusDisc {
    CVec A;
    CVec B;
    cplx c{0.0};

    int dimension() const { return static_cast<int>(A.size()); }
    CVec operator()(cplx zeta) const;
    CVec derivative(cplx zeta, int order = 1) const;
    /// Taylor coefficients 0..degree as an n x (degree + 1) matrix.
    CMat taylor(int degree) const;
    /// this o m, again in normal form.
    MoebiusDisc compose(const Moebius& m) const;
    MoebiusDisc scaled(const RVec& diag) const;  ///< z -> diag * z componentwise
};

/// Involutive ball automorphism exchanging 0 and a (|a| < 1).
CVec ball_involution(const CVec& a, const CVec& x);

/// Ball geodesic with phi(0) = z and phi(t) = w, t = tanh k(z, w) in (0, 1].
MoebiusDisc ball_two_point_disc(const CVec& z, const CVec& w, double* t_out);

/// Ball geodesic with phi(0) = z and phi'(0) = t v, t > 0.
MoebiusDisc ball_direction_disc(const CVec& z, const CVec& v, double* t_out);

/// Chang-Hu-Lee disc of the ball at p (|p| = 1): p + (zeta - 1) <v, p> v.
MoebiusDisc ball_chl_disc(const CVec& p, const CVec& v);

/// Automorphism m fixing 1 such that phi o m satisfies the CHL normalization
/// at phi(1) with outward normal nu: (phi o m)'(1) = <w, nu> w with w unit, and
/// Im <(phi o m)''(1), nu> = 0. Needs <phi'(1), nu> real positive.
Moebius chl_reparametrization(const CVec& d1, const CVec& d2, const CVec& nu);

/// Closed-form ball quantities.
double ball_kobayashi_distance(const CVec& z, const CVec& w);
double ball_kobayashi_metric(const CVec& z, const CVec& v);
double ball_poisson(const CVec& p, const CVec& z);
double ball_green(const CVec& z0, const CVec& z);

}  // namespace plurikernel
