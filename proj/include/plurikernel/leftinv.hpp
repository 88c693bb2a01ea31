#pragma once

// Left inverses and Lempert projections of complex geodesics.
//
// For a geodesic phi with dual map phi~, the left inverse of z is the unique
// root in the closed disc of h(zeta) = phi~(zeta) . (z - phi(zeta)).

#include <functional>

#include "plurikernel/geodesic.hpp"

namespace plurikernel {

struct LeftInverseOptions {
    double tol = 1e-12;  ///< on |h|
    int max_iter = 60;
    int contour_points = 1024;  ///< trapezoid nodes for the argument-principle fallback
};

cplx left_inverse(const GeodesicDisc& g, const CVec& z, const LeftInverseOptions& opt = {});

/// phi(left_inverse(g, z)).
CVec lempert_projection(const GeodesicDisc& g, const CVec& z, const LeftInverseOptions& opt = {});

/// Holomorphic gradient of the left inverse at z.
CVec left_inverse_gradient(const GeodesicDisc& g, const CVec& z, const LeftInverseOptions& opt = {});

/// Derivative of the left inverse at p = phi(1) applied to w: <w, nu_p> / <phi'(1), nu_p>.
cplx boundary_derivative(const GeodesicDisc& g, const CVec& p, const CVec& w);

/// Coefficient functions f_jk(z), j, k = 2..n (1-based), bounded by 1 on the ball.
using RetractionCoefficients = std::function<cplx(const CVec& z, int j, int k)>;

/// z -> (z_1 + eps sum_{j,k >= 2} z_j z_k f_jk(z), 0, ..., 0), a holomorphic retraction
/// of the ball onto the disc (zeta, 0, ..., 0) for 0 <= eps < 1/(2n).
class ExampleRetraction {
public:
    ExampleRetraction(int n, double eps, RetractionCoefficients f);

    CVec operator()(const CVec& z) const;
    int dimension() const { return n_; }
    double eps() const { return eps_; }

private:
    int n_;
    double eps_;
    RetractionCoefficients f_;
};

}  // namespace plurikernel
