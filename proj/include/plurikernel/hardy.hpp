#pragma once

// Fourier and Hardy-space machinery on the unit circle.
//
// Boundary data live on the equispaced grid theta_k = 2 pi k / M. Loops are
// truncated Fourier series of degree N per component; analytic discs keep the
// nonnegative frequencies 0..N and are evaluated inside the closed disc as
// truncated power series.

#include <span>
#include <vector>

#include "plurikernel/common.hpp"

namespace plurikernel {

/// Degree N and grid size M of the boundary discretization.
struct FourierGrid {
    int degree = 64;
    int size = 260;

    /// Default grid for a given degree: M = 4N + 4.
    static FourierGrid for_degree(int degree);

    /// Throws std::invalid_argument unless M is even and M >= 4N + 2.
    void validate() const;

    double angle(int k) const { return 2.0 * kPi * k / size; }
};

/// Trigonometric loop with coefficients indexed -N..N for each of n components.
class BoundaryLoop {
public:
    BoundaryLoop(int dimension, FourierGrid grid);

    int dimension() const { return static_cast<int>(coeffs_.rows()); }
    int degree() const { return grid_.degree; }
    const FourierGrid& grid() const { return grid_; }

    cplx coeff(int component, int k) const { return coeffs_(component, k + grid_.degree); }
    cplx& coeff(int component, int k) { return coeffs_(component, k + grid_.degree); }

    /// Values at the M grid angles, one row per component.
    CMat samples() const;

private:
    FourierGrid grid_;
    CMat coeffs_;
};

/// Holomorphic map of the disc stored as a truncated power series per component.
class AnalyticDisc {
public:
    AnalyticDisc() = default;
    /// coeffs is n x (N + 1): row j holds the Taylor coefficients of component j.
    explicit AnalyticDisc(CMat coeffs) : coeffs_(std::move(coeffs)) {}

    static AnalyticDisc constant(const CVec& value, int degree);

    int dimension() const { return static_cast<int>(coeffs_.rows()); }
    int degree() const { return static_cast<int>(coeffs_.cols()) - 1; }
    const CMat& coeffs() const { return coeffs_; }
    CMat& coeffs() { return coeffs_; }

    /// order-th derivative of the truncated series at zeta, |zeta| <= 1.
    /// Throws std::invalid_argument for |zeta| > 1 (beyond rounding slack).
    CVec eval(cplx zeta, int order = 0) const;

    /// Values on the M-point grid (row j = component j).
    CMat boundary_values(int grid_size) const;

    /// Values of the first derivative on the M-point grid.
    CMat boundary_derivative(int grid_size) const;

private:
    CMat coeffs_;
};

/// theta -> a0 + sum_j a_j cos(j theta) + b_j sin(j theta).
struct RealTrigPoly {
    double a0 = 0.0;
    std::vector<double> a;
    std::vector<double> b;

    RealTrigPoly() = default;
    explicit RealTrigPoly(int degree) : a(degree, 0.0), b(degree, 0.0) {}

    int degree() const { return static_cast<int>(a.size()); }
    double operator()(double theta) const;
    RVec samples(int grid_size) const;

    /// Least-squares fit of degree N to M >= 2N + 1 equispaced real samples.
    static RealTrigPoly from_samples(std::span<const double> values, int degree);
};

/// Normalized DFT: out[k] = (1/M) sum_m x_m e^{-i k theta_m}, k = 0..M-1
/// (index M - k holds frequency -k).
std::vector<cplx> dft(std::span<const cplx> values);

/// Inverse of dft: values from M frequency bins.
std::vector<cplx> idft(std::span<const cplx> bins);

/// Fourier coefficients of M samples per component. Throws std::invalid_argument
/// on a sample-count mismatch with the grid.
BoundaryLoop analyze(const CMat& samples, const FourierGrid& grid);

struct HolomorphicSplit {
    AnalyticDisc disc;
    double residual = 0.0;  ///< l2 norm of the negative-frequency coefficients
};

HolomorphicSplit holomorphic_split(const BoundaryLoop& loop);

/// Harmonic conjugate normalized to vanish at theta = 0.
RealTrigPoly conjugate(const RealTrigPoly& u);

inline CVec eval(const AnalyticDisc& disc, cplx zeta, int order = 0) {
    return disc.eval(zeta, order);
}

}  // namespace plurikernel
