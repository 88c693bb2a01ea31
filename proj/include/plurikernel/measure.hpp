#pragma once

// Boundary form omega = (dd^c r)^{n-1} ^ d^c r / |dr|^n, quadrature over the
// boundary of balls and ellipsoids, and the reproducing formula for
// pluriharmonic functions with the measure |Omega_{D,p}(z)|^n omega(p).
//
// Conventions: d^c = i (dbar - d), so dd^c = 2i d dbar and d^c(|z|^2) = 2 d theta
// on the unit circle.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "plurikernel/domains.hpp"
#include "plurikernel/geodesic.hpp"

namespace plurikernel {

/// omega evaluated on an oriented orthonormal tangent frame (2n x (2n-1)),
/// from the real gradient and real Hessian of any defining function at the point.
double omega_density(const RVec& real_grad, const RMat& real_hess, const RMat& frame);
/// Same, for the defining function of spec at the boundary point node.p.
double omega_density(const DomainSpec& spec, const BoundaryPoint& node);

struct QuadratureNode {
    BoundaryPoint point;
    double weight = 0.0;  ///< rule weight times chart Jacobian
    double density = 0.0;
    double s = 0.0, alpha = 0.0, beta = 0.0;
};

/// Tensor grid on the chart (s, alpha, beta) of the boundary:
///   n = 1: z = e^{i alpha} / sqrt(a)
///   n = 2: z = (sqrt((1+s)/2) e^{i alpha} / sqrt(a1), sqrt((1-s)/2) e^{i beta} / sqrt(a2))
/// Gauss-Legendre in s, trapezoid in alpha and beta; nodes ordered with beta fastest.
struct QuadratureGrid {
    DomainSpec spec;
    int resolution = 0;
    std::vector<QuadratureNode> nodes;

    /// Sum of weight * density.
    double omega_mass() const;
    /// Number of nodes sharing one value of s.
    int slice_size() const;
};

/// Supported: ball or ellipsoid in dimension 1 or 2.
QuadratureGrid build_grid(const DomainSpec& spec, int resolution);

struct NormalizationConstant {
    int n = 0;
    double kappa = 0.0;
    double omega_mass = 0.0;
    double drift = 0.0;  ///< relative change of the mass under resolution doubling
};

/// kappa_n = 1 / (omega-mass of the unit sphere). Throws NumericalError when the
/// doubling drift exceeds 1e-6.
NormalizationConstant calibrate_kappa(int n, int resolution = 32);

struct HolomorphicTerm {
    cplx coef;
    std::vector<int> powers;  ///< exponent per complex coordinate
};

/// F(z) = Re(sum coef z^powers) + constant.
struct PluriharmonicFunction {
    std::vector<HolomorphicTerm> terms;
    double constant = 0.0;

    double operator()(const CVec& z) const;
    /// Throws std::invalid_argument for negative exponents or wrong arity.
    void validate(int n) const;

    static PluriharmonicFunction constant_function(double c);
};

enum class KernelSource { closed_form, solved };

struct MeasureOptions {
    KernelSource source = KernelSource::solved;
    SolverConfig solver;
    int workers = 1;
};

/// |Omega_{D,p_k}(z)| at every node. Solved kernels are warm-started along each
/// slice of constant s; every slice starts cold so values do not depend on the
/// worker count.
struct KernelSamples {
    CVec z;
    std::vector<double> values;
    std::vector<char> skipped;
    int skipped_count = 0;
};

KernelSamples sample_kernel(const QuadratureGrid& grid, const CVec& z, const MeasureOptions& opts = {});

struct ReproduceReport {
    double estimate = 0.0;
    double reference = 0.0;
    double error = 0.0;
    int skipped = 0;
    int nodes = 0;
};

/// kappa_n sum w_k |Omega_{p_k}(z)|^n F(p_k) density_k.
ReproduceReport reproduce_pluriharmonic(const PluriharmonicFunction& f, const QuadratureGrid& grid,
                                        const KernelSamples& samples, const NormalizationConstant& kappa);
ReproduceReport reproduce_pluriharmonic(const DomainSpec& spec, const PluriharmonicFunction& f, const CVec& z,
                                        const QuadratureGrid& grid, const MeasureOptions& opts = {});

/// kappa_n-scaled total mass of |Omega_{p}(z)|^n omega(p); expected 1.
double demailly_mass(const QuadratureGrid& grid, const KernelSamples& samples, const NormalizationConstant& kappa);
double demailly_mass(const DomainSpec& spec, const CVec& z, const QuadratureGrid& grid,
                     const MeasureOptions& opts = {});

/// One row per node: s, alpha, beta, Re/Im of p, weight, density, |Omega|.
void write_node_csv(std::ostream& os, const QuadratureGrid& grid, const KernelSamples& samples);

}  // namespace plurikernel
