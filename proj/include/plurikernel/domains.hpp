#pragma once

// Defining functions of the supported strongly convex domains.
//
//   ball                 r(z) = |z|^2 - 1
//   ellipsoid            r(z) = sum a_j |z_j|^2 - 1
//   perturbed_ellipsoid  r(z) = sum a_j |z_j|^2 - 1 + eps * bump(x, y)
//
// The bump is a real polynomial in the interleaved real coordinates
// (x1, y1, ..., xn, yn). Real Hessians use the same ordering.

#include <cstdint>
#include <string>
#include <vector>

#include "plurikernel/common.hpp"

namespace plurikernel {

enum class DomainKind { ball, ellipsoid, perturbed_ellipsoid };

struct Monomial {
    double coef = 0.0;
    std::vector<int> powers;  ///< exponent per real coordinate, length 2n

    bool operator==(const Monomial&) const = default;
};

class DomainSpec {
public:
    /// The unit ball of C^2.
    DomainSpec() : DomainSpec(DomainKind::ball, {1.0, 1.0}, 0.0, {}) {}

    static DomainSpec ball(int n);
    static DomainSpec ellipsoid(std::vector<double> axes);
    static DomainSpec perturbed_ellipsoid(std::vector<double> axes, double eps,
                                          std::vector<Monomial> bump);

    DomainKind kind() const { return kind_; }
    int dimension() const { return static_cast<int>(axes_.size()); }
    const std::vector<double>& axes() const { return axes_; }
    double eps() const { return eps_; }
    const std::vector<Monomial>& bump() const { return bump_; }

    /// True when r is the quadric sum a_j |z_j|^2 - 1 (ball or ellipsoid, or eps = 0).
    bool is_quadric() const { return eps_ == 0.0 || bump_.empty(); }

    double r(const CVec& z) const;
    /// Holomorphic gradient (dr/dz_j), so that dr(w) = 2 Re(grad . w).
    CVec grad(const CVec& z) const;
    /// Real gradient in interleaved coordinates.
    RVec real_grad(const CVec& z) const;
    /// 2n x 2n real Hessian in interleaved coordinates.
    RMat real_hessian(const CVec& z) const;

    /// Member of the linear homotopy (1 - s) r_base + s r, where r_base is the
    /// quadric with axes a_j / sigma^2. The result is again a perturbed ellipsoid.
    DomainSpec homotopy_member(double sigma, double s) const;

    /// Quadric part (axes only) of this domain.
    DomainSpec quadric_part() const;

    bool operator==(const DomainSpec&) const = default;

private:
    DomainSpec(DomainKind kind, std::vector<double> axes, double eps, std::vector<Monomial> bump);

    DomainKind kind_;
    std::vector<double> axes_;
    double eps_ = 0.0;
    std::vector<Monomial> bump_;
};

struct BoundaryPoint {
    CVec p;
    CVec normal;  ///< unit outward normal
    RMat frame;   ///< 2n x (2n - 1) orthonormal tangent vectors, (normal, frame) positively oriented
};

/// Unit outward normal and tangent frame at p. Throws std::invalid_argument when
/// |r(p)| exceeds tol.
BoundaryPoint normal(const DomainSpec& spec, const CVec& p, double tol = 1e-8);

/// Unit outward normal only.
CVec unit_normal(const DomainSpec& spec, const CVec& p);

/// Positively oriented orthonormal frame of the real orthogonal complement of nu.
RMat tangent_frame(const CVec& nu);

/// Boundary point on the ray from the origin in the direction d (d != 0).
CVec boundary_along_ray(const DomainSpec& spec, const CVec& direction);

/// Boundary point hit by the ray origin + s * direction, s > 0; origin interior.
CVec boundary_along_ray(const DomainSpec& spec, const CVec& origin, const CVec& direction);

struct ValidationReport {
    double min_hessian_eigenvalue = 0.0;
    double max_boundary_residual = 0.0;
    int samples = 0;
    bool ok = false;
    std::string message;
};

/// Samples boundary points and checks positivity of the real Hessian there.
/// Failures are reported, not thrown.
ValidationReport validate(const DomainSpec& spec, int samples = 1000, std::uint64_t seed = 1);

/// Linear map z -> (sqrt(a_j) z_j) taking the quadric part of spec onto the unit ball.
CVec to_ball(const DomainSpec& spec, const CVec& z);
CVec from_ball(const DomainSpec& spec, const CVec& w);

}  // namespace plurikernel
