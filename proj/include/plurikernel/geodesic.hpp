#pragma once

// Complex geodesics (stationary discs) of strongly convex domains together
// with their dual maps.
//
// A geodesic phi is represented by its Taylor coefficients 0..N; the dual map
// is the holomorphic part of theta -> e^{i theta} mu(theta) dr(phi(e^{i theta}))
// with mu = exp(q) > 0. The solver is a Gauss-Newton iteration on
//   r(phi) = 0 on the grid,
//   negative Fourier modes of e^{i theta} mu dr(phi) = 0,
//   phi~(0) . phi'(0) = 1,
// plus the interpolation conditions of the chosen parametrization.

#include <cstdint>
#include <optional>
#include <variant>

#include "plurikernel/domains.hpp"
#include "plurikernel/hardy.hpp"
#include "plurikernel/mobius.hpp"

namespace plurikernel {

struct SolverConfig {
    int modes = 64;
    int grid = 0;  ///< 0 selects 4 * modes + 4
    double newton_tol = 1e-10;
    int max_iter = 50;
    double min_damping = 1.0 / 64.0;
    int homotopy_steps = 8;
    std::uint64_t seed = 0;
    /// Amplitude of a seeded random perturbation applied to the initial guess.
    double initial_perturbation = 0.0;

    FourierGrid fourier() const;
    void validate() const;
};

struct ResidualReport {
    double boundary_defect = 0.0;  ///< max |r(phi)| on the grid
    double dual_defect = 0.0;      ///< max |phi~ - e^{it} mu dr(phi)| on the grid
    double norm_defect = 0.0;      ///< max |phi~ . phi' - 1| on sampled points
    double mu_min = 0.0;
    double newton_residual = 0.0;  ///< l2 norm of the full discrete residual
    double spectral_tail = 0.0;    ///< largest coefficient among the top quarter of modes
    bool under_resolved = false;
    int iterations = 0;
    int homotopy_steps = 0;
    bool converged = false;
};

struct TwoPointParams {
    CVec z, w;
    double t = 0.0;
};
struct DirectionParams {
    CVec z, v;
    double t = 0.0;
};
struct ChlParams {
    CVec p, v;
};
/// Chang-Hu-Lee disc at p passing through z at zeta.
struct ChlThroughParams {
    CVec p, z;
    cplx zeta;
};

/// Geodesic through z and w in the balanced gauge <T phi_2, T phi_1> = 0
/// (T the quadric axis scaling), with phi(zeta_z) = z, phi(zeta_w) = w and
/// zeta_w - zeta_z real positive.
struct PairParams {
    CVec z, w;
    cplx zeta_z, zeta_w;
};

using Parametrization =
    std::variant<TwoPointParams, DirectionParams, ChlParams, ChlThroughParams, PairParams>;

struct GeodesicDisc {
    AnalyticDisc phi;
    AnalyticDisc phi_tilde;
    RealTrigPoly mu;
    RealTrigPoly log_mu;
    DomainSpec spec;
    FourierGrid grid;
    Parametrization meta;
    ResidualReport residuals;

    CVec operator()(cplx zeta) const { return phi.eval(zeta); }
};

// Every solve accepts an optional previous solution of the same kind on the same
// domain and grid as a warm start; it is ignored when it does not match.
GeodesicDisc solve_two_point(const DomainSpec& spec, const CVec& z, const CVec& w,
                             const SolverConfig& cfg = {}, const GeodesicDisc* warm = nullptr);
GeodesicDisc solve_direction(const DomainSpec& spec, const CVec& z, const CVec& v,
                             const SolverConfig& cfg = {}, const GeodesicDisc* warm = nullptr);
GeodesicDisc solve_chl(const DomainSpec& spec, const CVec& p, const CVec& v,
                       const SolverConfig& cfg = {}, const GeodesicDisc* warm = nullptr);
/// Geodesic through z and w in the balanced gauge. Better conditioned than
/// solve_two_point when z lies close to the boundary.
GeodesicDisc solve_pair(const DomainSpec& spec, const CVec& z, const CVec& w, const SolverConfig& cfg = {},
                        const GeodesicDisc* warm = nullptr);
/// Parameter t of the two-point parametrization (phi(0) = z, phi(t) = w) of a pair solve.
double pair_parameter(const GeodesicDisc& pair);
/// phi'(0) / |phi'(0)| of the two-point parametrization of a pair solve, times t.
CVec pair_spherical_point(const GeodesicDisc& pair);

/// CHL-normalized geodesic at p through the interior point z. The crossing
/// parameter is stored in ChlThroughParams::zeta.
GeodesicDisc solve_chl_through(const DomainSpec& spec, const CVec& p, const CVec& z,
                               const SolverConfig& cfg = {}, const GeodesicDisc* warm = nullptr);

/// Closed-form geodesics of the ball. Throw std::invalid_argument on other domains.
GeodesicDisc ball_geodesic_two_point(const DomainSpec& spec, const CVec& z, const CVec& w,
                                     FourierGrid grid = FourierGrid::for_degree(64));
GeodesicDisc ball_geodesic_direction(const DomainSpec& spec, const CVec& z, const CVec& v,
                                     FourierGrid grid = FourierGrid::for_degree(64));
GeodesicDisc ball_geodesic_chl(const DomainSpec& spec, const CVec& p, const CVec& v,
                               FourierGrid grid = FourierGrid::for_degree(64));

/// Geodesic from stored Taylor coefficients and log mu; the dual map and the
/// residual report are recomputed.
GeodesicDisc geodesic_from_coefficients(const DomainSpec& spec, FourierGrid grid, const CMat& coeffs,
                                        const RealTrigPoly& log_mu, Parametrization meta);

/// Geodesic built from a Moebius-form disc attached to a quadric domain:
/// the dual map and mu are derived from phi.
GeodesicDisc geodesic_from_moebius(const DomainSpec& spec, const MoebiusDisc& disc,
                                   Parametrization meta, FourierGrid grid);

ResidualReport residual_report(const GeodesicDisc& g);

/// Checks v in L_p: |v| = 1 and <v, nu_p> real with <v, nu_p> >= 1e-8.
void require_in_lp(const DomainSpec& spec, const CVec& p, const CVec& v);

}  // namespace plurikernel
