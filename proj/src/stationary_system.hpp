#pragma once

// Discrete stationarity system for attached discs. Internal to the solver.
//
// Unknown vector layout:
//   [Re c_{j,k}, Im c_{j,k}]  j = 0..n-1, k = 0..N     (2 n (N + 1) entries)
//   [q0, a_1, b_1, ..., a_N, b_N]                     (log mu, 2N + 1 entries)
//   [regime extras]                                   (t, Re/Im zeta, or Re/Im zeta_z and the gap)

#include "plurikernel/domains.hpp"
#include "plurikernel/hardy.hpp"

namespace plurikernel::detail {

struct Regime {
    enum class Kind { two_point, two_point_boundary, two_point_balanced, direction, chl, chl_through };
    Kind kind = Kind::two_point;
    CVec z;   ///< phi(0) target (two_point, direction) or interior point (chl_through)
    CVec w;   ///< second point (two_point*)
    CVec v;   ///< direction (direction, chl)
    CVec p;   ///< boundary point (chl, chl_through)
    CVec nu;  ///< outward normal at p
    RVec weights;  ///< gauge weights (quadric axes) for two_point_balanced

    int extras() const;
    int rows(int n) const;
};

class StationarySystem {
public:
    StationarySystem(DomainSpec spec, FourierGrid grid, Regime regime);

    int n() const { return n_; }
    int unknowns() const { return coeff_count() + q_count() + regime_.extras(); }
    int residual_size() const;

    int coeff_count() const { return 2 * n_ * (grid_.degree + 1); }
    int q_count() const { return 2 * grid_.degree + 1; }
    int extras_offset() const { return coeff_count() + q_count(); }

    /// Residual, and the analytic Jacobian when jac != nullptr.
    RVec evaluate(const RVec& x, RMat* jac) const;

    CMat coefficients(const RVec& x) const;
    RealTrigPoly log_mu(const RVec& x) const;
    RVec pack(const CMat& coeffs, const RealTrigPoly& q) const;

    const DomainSpec& spec() const { return spec_; }
    const FourierGrid& grid() const { return grid_; }
    const Regime& regime() const { return regime_; }

private:
    DomainSpec spec_;
    FourierGrid grid_;
    Regime regime_;
    int n_;
};

struct NewtonResult {
    RVec x;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

NewtonResult gauss_newton(const StationarySystem& sys, RVec x0, double tol, int max_iter,
                          double min_damping);

}  // namespace plurikernel::detail
