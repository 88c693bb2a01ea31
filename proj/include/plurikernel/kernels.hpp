#pragma once

// Kobayashi distance and metric, pluricomplex Green function, spherical
// representations, pluricomplex Poisson kernel and the numerical checks built
// on them.
//
// Every kernel is evaluated through solved geodesics; closed forms for
// quadric domains are provided separately and used as oracles.

#include <functional>
#include <optional>
#include <vector>

#include "plurikernel/geodesic.hpp"
#include "plurikernel/leftinv.hpp"

namespace plurikernel {

double kobayashi_distance(const DomainSpec& spec, const CVec& z, const CVec& w, const SolverConfig& cfg = {});
double kobayashi_metric(const DomainSpec& spec, const CVec& z, const CVec& v, const SolverConfig& cfg = {});
/// log tanh k(z0, z).
double green(const DomainSpec& spec, const CVec& z0, const CVec& z, const SolverConfig& cfg = {});
CVec spherical_rep_interior(const DomainSpec& spec, const CVec& z0, const CVec& z, const SolverConfig& cfg = {});

struct CHLData {
    CVec p;
    CVec v;     ///< unit, <v, nu_p> real positive
    cplx zeta;  ///< phi_v(zeta) = z
};

struct ChlSolve {
    CHLData data;
    GeodesicDisc disc;  ///< the CHL geodesic phi_v
};

/// CHL coordinates of z with respect to p, together with the geodesic.
ChlSolve chl_solve(const DomainSpec& spec, const CVec& p, const CVec& z, const SolverConfig& cfg = {},
                   const GeodesicDisc* warm = nullptr);
CHLData chl_coordinates(const DomainSpec& spec, const CVec& p, const CVec& z, const SolverConfig& cfg = {});

/// Unitary map sending nu to e_1 (Householder reflection after a phase fix).
CMat normal_rotation(const CVec& nu);

CVec spherical_rep_boundary(const DomainSpec& spec, const CVec& p, const CVec& z, const SolverConfig& cfg = {});

/// -P(zeta) / <v, nu_p>^2 for CHL data of z.
double poisson_from(const CHLData& d, const CVec& nu);
double poisson(const DomainSpec& spec, const CVec& p, const CVec& z, const SolverConfig& cfg = {},
               const GeodesicDisc* warm = nullptr);

bool horosphere_contains(const DomainSpec& spec, const CVec& p, double radius, const CVec& z,
                         const SolverConfig& cfg = {});

/// -P(rho_v(z)) / <v, nu_p>^2 with rho_v the left inverse of the CHL geodesic for v.
double extremal_member(const DomainSpec& spec, const CVec& p, const CVec& v, const CVec& z,
                       const SolverConfig& cfg = {});
/// Same, for an already solved CHL geodesic.
double extremal_member(const GeodesicDisc& chl_disc, const CVec& z);

// Closed forms on quadric domains (ball and ellipsoids), via z -> (sqrt(a_j) z_j).
double quadric_kobayashi_distance(const DomainSpec& spec, const CVec& z, const CVec& w);
double quadric_kobayashi_metric(const DomainSpec& spec, const CVec& z, const CVec& v);
double quadric_green(const DomainSpec& spec, const CVec& z0, const CVec& z);
double quadric_poisson(const DomainSpec& spec, const CVec& p, const CVec& z);

/// Polynomial (Neville) extrapolation of samples y(x) to x = 0.
double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y);

/// Curve ending at a boundary point p.
struct CurveSpec {
    std::function<CVec(double)> gamma;  ///< t in [0, 1], gamma(1) = p
    CVec end_velocity;                  ///< gamma'(1)
};

/// gamma(t) = p - (1 - t) d - bend (1 - t)^2 nu_p; bend < 0 picks a value that keeps
/// the curve inside for quadric parts.
CurveSpec boundary_curve(const DomainSpec& spec, const CVec& p, const CVec& d, double bend = -1.0);

struct BoundaryLimitReport {
    std::vector<double> t;
    std::vector<double> products;  ///< |Omega(gamma(t))| (1 - t)
    double limit = 0.0;
    double target = 0.0;  ///< Re(2 / <gamma'(1), nu_p>), 0 for complex-tangential curves
    double largest_t = 0.0;
};

BoundaryLimitReport boundary_limit(const DomainSpec& spec, const CVec& p, const CurveSpec& curve,
                                   const std::vector<double>& t_values, const SolverConfig& cfg = {});

struct GvpReport {
    double lhs = 0.0;  ///< Omega(z0)
    double rhs = 0.0;  ///< -dL/dnu at p, extrapolated
    double error = 0.0;
    std::vector<double> steps;
    std::vector<double> quotients;  ///< L(p - h nu) / h
};

using ScalarField = std::function<double(const CVec&)>;

/// Omega_{D,p}(z0) against the extrapolated normal derivative of the Green function.
GvpReport gvp_check(const DomainSpec& spec, const CVec& z0, const CVec& p, const std::vector<double>& steps,
                    const SolverConfig& cfg = {});
/// Same identity for caller-supplied Omega_{D,p} and L_{D,z0}.
GvpReport gvp_check(const ScalarField& omega, const ScalarField& green_fn, const CVec& z0, const CVec& p,
                    const CVec& nu, const std::vector<double>& steps);

struct HessianReport {
    CMat levi;  ///< complex Hessian d^2 f / dz_j dzbar_k
    double min_eigenvalue = 0.0;
    double degeneracy_ratio = 0.0;  ///< |det| / (trace / n)^n
    bool psh = false;
};

/// Real Hessian of f at z by fourth-order central differences, interleaved coordinates.
RMat real_hessian_fd(const ScalarField& f, const CVec& z, double h);
RVec real_gradient_fd(const ScalarField& f, const CVec& z, double h);

HessianReport ma_check(const ScalarField& f, const CVec& z, double h = 1e-3, double psh_tol = 1e-6);
/// Guards: |z - z0| >= 0.1.
HessianReport ma_check_green(const DomainSpec& spec, const CVec& z0, const CVec& z, double h = 1e-3,
                             const SolverConfig& cfg = {});
/// Guards: |z - p| >= 0.1.
HessianReport ma_check_poisson(const DomainSpec& spec, const CVec& p, const CVec& z, double h = 1e-3,
                               const SolverConfig& cfg = {});

/// Min eigenvalue of the real Hessian of f restricted to the orthogonal complement of grad f.
double restricted_hessian_min(const ScalarField& f, const CVec& z, double h);
double horosphere_convexity_check(const DomainSpec& spec, const CVec& p, const CVec& z, double h = 1e-3,
                                  const SolverConfig& cfg = {});

struct LevelSetSample {
    std::vector<CVec> points;
    std::vector<double> residuals;  ///< |Omega(z) + 1/R|
    int skipped = 0;
    CVec anchor;
};

/// Points of the horosphere boundary {Omega = -1/R} along seeded rays from an interior anchor.
LevelSetSample levelset(const DomainSpec& spec, const CVec& p, double radius, int count, std::uint64_t seed,
                        const SolverConfig& cfg = {});
/// Same for a caller-supplied Omega_{D,p}.
LevelSetSample levelset(const DomainSpec& spec, const ScalarField& omega, const CVec& p, double radius, int count,
                        std::uint64_t seed);

}  // namespace plurikernel
