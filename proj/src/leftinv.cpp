#include "plurikernel/leftinv.hpp"

#include <cmath>
#include <sstream>

namespace plurikernel {

namespace {

cplx clamp_closed(cplx zeta) {
    const double a = std::abs(zeta);
    return a > 1.0 ? zeta / a : zeta;
}

struct HValue {
    cplx h;
    cplx dh;
};

HValue h_eval(const GeodesicDisc& g, const CVec& z, cplx zeta) {
    const CVec tl = g.phi_tilde.eval(zeta);
    const CVec dtl = g.phi_tilde.eval(zeta, 1);
    const CVec f = g.phi.eval(zeta);
    const CVec df = g.phi.eval(zeta, 1);
    return {bilinear(tl, z - f), bilinear(dtl, z - f) - bilinear(tl, df)};
}

bool newton(const GeodesicDisc& g, const CVec& z, cplx& zeta, const LeftInverseOptions& opt) {
    for (int it = 0; it < opt.max_iter; ++it) {
        const HValue v = h_eval(g, z, zeta);
        if (std::abs(v.h) <= opt.tol) return true;
        if (v.dh == 0.0) return false;
        zeta = clamp_closed(zeta - v.h / v.dh);
    }
    return std::abs(h_eval(g, z, zeta).h) <= opt.tol;
}

}  // namespace

cplx left_inverse(const GeodesicDisc& g, const CVec& z, const LeftInverseOptions& opt) {
    if (z.size() != g.phi.dimension()) throw std::invalid_argument("z: dimension mismatch");
    if (!(g.spec.r(z) <= 1e-8)) throw std::invalid_argument("z is outside the closed domain");

    // Best of a 32-point polar grid.
    cplx best = 0.0;
    double best_h = std::abs(h_eval(g, z, 0.0).h);
    for (int ri = 1; ri <= 4; ++ri)
        for (int ai = 0; ai < 8; ++ai) {
            if (ri == 4 && ai == 0) continue;
            const cplx zeta = std::polar(ri / 4.0, 2.0 * kPi * ai / 8.0);
            const double hv = std::abs(h_eval(g, z, zeta).h);
            if (hv < best_h) {
                best_h = hv;
                best = zeta;
            }
        }
    // The angle-0 slot is replaced by 1 itself, where boundary data sit.
    if (std::abs(h_eval(g, z, 1.0).h) < best_h) best = 1.0;

    cplx zeta = best;
    if (newton(g, z, zeta, opt)) return zeta;

    // Argument principle: the winding number of h on the circle is 1, so the
    // contour integral of zeta h'/h returns the root.
    const double rad = 1.0 - 1e-6;
    cplx acc = 0.0;
    for (int k = 0; k < opt.contour_points; ++k) {
        const cplx e = std::polar(1.0, 2.0 * kPi * k / opt.contour_points);
        const cplx s = rad * e;
        const HValue v = h_eval(g, z, s);
        acc += s * v.dh / v.h * s;  // dzeta = i s dtheta; 1/(2 pi i) cancels i
    }
    zeta = clamp_closed(acc / static_cast<double>(opt.contour_points));
    if (newton(g, z, zeta, opt)) return zeta;
    std::ostringstream os;
    os << "|h| = " << std::abs(h_eval(g, z, zeta).h) << " at zeta = " << zeta;
    throw NumericalError("left inverse root finder failed", os.str());
}

CVec lempert_projection(const GeodesicDisc& g, const CVec& z, const LeftInverseOptions& opt) {
    return g.phi.eval(left_inverse(g, z, opt));
}

CVec left_inverse_gradient(const GeodesicDisc& g, const CVec& z, const LeftInverseOptions& opt) {
    const cplx zeta = left_inverse(g, z, opt);
    const HValue v = h_eval(g, z, zeta);
    return -g.phi_tilde.eval(zeta) / v.dh;
}

cplx boundary_derivative(const GeodesicDisc& g, const CVec& p, const CVec& w) {
    if ((g.phi.eval(1.0) - p).norm() > 1e-8) throw std::invalid_argument("p is not phi(1)");
    const CVec nu = unit_normal(g.spec, p);
    const cplx den = hermitian(g.phi.eval(1.0, 1), nu);
    if (std::abs(den) < 1e-12) throw std::invalid_argument("geodesic is tangent to the boundary at p");
    return hermitian(w, nu) / den;
}

ExampleRetraction::ExampleRetraction(int n, double eps, RetractionCoefficients f)
    : n_(n), eps_(eps), f_(std::move(f)) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(eps >= 0.0 && eps < 1.0 / (2.0 * n))) throw std::invalid_argument("eps must lie in [0, 1/(2n))");
    if (!f_) throw std::invalid_argument("missing coefficient functions");
}

CVec ExampleRetraction::operator()(const CVec& z) const {
    if (z.size() != n_) throw std::invalid_argument("z: dimension mismatch");
    cplx s = 0.0;
    for (int j = 1; j < n_; ++j)
        for (int k = 1; k < n_; ++k) s += z(j) * z(k) * f_(z, j + 1, k + 1);
    CVec out = CVec::Zero(n_);
    out(0) = z(0) + eps_ * s;
    return out;
}

}  // namespace plurikernel
