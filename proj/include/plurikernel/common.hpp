#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace plurikernel {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an iterative numerical procedure does not reach its tolerance.
/// Invalid inputs are reported with std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::string diagnostic = {})
        : std::runtime_error(what), diagnostic_(std::move(diagnostic)) {}

    const std::string& diagnostic() const noexcept { return diagnostic_; }

private:
    std::string diagnostic_;
};

/// Hermitian pairing <a, b> = sum a_j conj(b_j).
inline cplx hermitian(const CVec& a, const CVec& b) { return b.dot(a); }

/// Bilinear pairing a . b = sum a_j b_j (the pairing used by dual maps).
inline cplx bilinear(const CVec& a, const CVec& b) { return (a.array() * b.array()).sum(); }

/// Complex n-vector to interleaved real 2n-vector (x1, y1, x2, y2, ...).
inline RVec to_real(const CVec& z) {
    RVec out(2 * z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        out(2 * j) = z(j).real();
        out(2 * j + 1) = z(j).imag();
    }
    return out;
}

inline CVec from_real(const RVec& x) {
    CVec out(x.size() / 2);
    for (Eigen::Index j = 0; j < out.size(); ++j) out(j) = cplx(x(2 * j), x(2 * j + 1));
    return out;
}

/// Poisson kernel of the unit disc with pole at 1.
inline double disc_poisson(cplx zeta) {
    return (1.0 - std::norm(zeta)) / std::norm(1.0 - zeta);
}

}  // namespace plurikernel
