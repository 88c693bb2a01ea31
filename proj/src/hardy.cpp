#include "plurikernel/hardy.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

namespace plurikernel {

namespace {

Eigen::FFT<double>& fft_engine() {
    // Eigen::FFT caches plans per size; one engine per thread.
    thread_local Eigen::FFT<double> engine = [] {
        Eigen::FFT<double> e;
        e.SetFlag(Eigen::FFT<double>::Unscaled);
        return e;
    }();
    return engine;
}

constexpr double kUnitSlack = 1e-9;

}  // namespace

FourierGrid FourierGrid::for_degree(int degree) { return FourierGrid{degree, 4 * degree + 4}; }

void FourierGrid::validate() const {
    if (degree < 1) throw std::invalid_argument("Fourier degree must be >= 1");
    if (size % 2 != 0) throw std::invalid_argument("grid size must be even");
    if (size < 4 * degree + 2)
        throw std::invalid_argument("grid size " + std::to_string(size) + " below 4N+2 = " +
                                    std::to_string(4 * degree + 2));
}

std::vector<cplx> dft(std::span<const cplx> values) {
    std::vector<cplx> in(values.begin(), values.end());
    std::vector<cplx> out;
    fft_engine().fwd(out, in);
    const double scale = 1.0 / static_cast<double>(values.size());
    for (auto& c : out) c *= scale;
    return out;
}

std::vector<cplx> idft(std::span<const cplx> bins) {
    std::vector<cplx> in(bins.begin(), bins.end());
    std::vector<cplx> out;
    fft_engine().inv(out, in);
    return out;
}

BoundaryLoop::BoundaryLoop(int dimension, FourierGrid grid)
    : grid_(grid), coeffs_(CMat::Zero(dimension, 2 * grid.degree + 1)) {
    grid_.validate();
}

CMat BoundaryLoop::samples() const {
    const int m = grid_.size;
    const int n_deg = grid_.degree;
    CMat out(dimension(), m);
    std::vector<cplx> bins(m);
    for (int j = 0; j < dimension(); ++j) {
        std::fill(bins.begin(), bins.end(), cplx{});
        for (int k = -n_deg; k <= n_deg; ++k) bins[(k + m) % m] = coeff(j, k);
        auto vals = idft(bins);
        for (int i = 0; i < m; ++i) out(j, i) = vals[i];
    }
    return out;
}

AnalyticDisc AnalyticDisc::constant(const CVec& value, int degree) {
    CMat c = CMat::Zero(value.size(), degree + 1);
    c.col(0) = value;
    return AnalyticDisc(std::move(c));
}

CVec AnalyticDisc::eval(cplx zeta, int order) const {
    if (std::abs(zeta) > 1.0 + kUnitSlack)
        throw std::invalid_argument("analytic disc evaluated outside the closed unit disc");
    if (order < 0) throw std::invalid_argument("negative derivative order");
    const int n_deg = degree();
    CVec out = CVec::Zero(dimension());
    // Horner on the differentiated series: sum_k k!/(k-order)! c_k zeta^{k-order}.
    for (int k = n_deg; k >= order; --k) {
        double falling = 1.0;
        for (int i = 0; i < order; ++i) falling *= static_cast<double>(k - i);
        out = out * zeta + falling * coeffs_.col(k);
    }
    return out;
}

CMat AnalyticDisc::boundary_values(int grid_size) const {
    const int n_deg = degree();
    if (n_deg >= grid_size) throw std::invalid_argument("grid smaller than disc degree");
    CMat out(dimension(), grid_size);
    std::vector<cplx> bins(grid_size);
    for (int j = 0; j < dimension(); ++j) {
        std::fill(bins.begin(), bins.end(), cplx{});
        for (int k = 0; k <= n_deg; ++k) bins[k] = coeffs_(j, k);
        auto vals = idft(bins);
        for (int i = 0; i < grid_size; ++i) out(j, i) = vals[i];
    }
    return out;
}

CMat AnalyticDisc::boundary_derivative(int grid_size) const {
    const int n_deg = degree();
    CMat out(dimension(), grid_size);
    std::vector<cplx> bins(grid_size);
    for (int j = 0; j < dimension(); ++j) {
        std::fill(bins.begin(), bins.end(), cplx{});
        // phi'(e^{it}) = sum k c_k e^{i(k-1)t}
        for (int k = 1; k <= n_deg; ++k) bins[k - 1] = static_cast<double>(k) * coeffs_(j, k);
        auto vals = idft(bins);
        for (int i = 0; i < grid_size; ++i) out(j, i) = vals[i];
    }
    return out;
}

double RealTrigPoly::operator()(double theta) const {
    double v = a0;
    for (int j = 0; j < degree(); ++j) {
        v += a[j] * std::cos((j + 1) * theta) + b[j] * std::sin((j + 1) * theta);
    }
    return v;
}

RVec RealTrigPoly::samples(int grid_size) const {
    std::vector<cplx> bins(grid_size);
    bins[0] = a0;
    for (int j = 1; j <= degree(); ++j) {
        // a cos + b sin = (a - ib)/2 e^{ij} + (a + ib)/2 e^{-ij}
        const cplx plus(a[j - 1] / 2, -b[j - 1] / 2);
        bins[j % grid_size] += plus;
        bins[(grid_size - j) % grid_size] += std::conj(plus);
    }
    auto vals = idft(bins);
    RVec out(grid_size);
    for (int i = 0; i < grid_size; ++i) out(i) = vals[i].real();
    return out;
}

RealTrigPoly RealTrigPoly::from_samples(std::span<const double> values, int degree) {
    const int m = static_cast<int>(values.size());
    if (m < 2 * degree + 1) throw std::invalid_argument("too few samples for trig degree");
    std::vector<cplx> in(values.begin(), values.end());
    auto bins = dft(in);
    RealTrigPoly p(degree);
    p.a0 = bins[0].real();
    for (int j = 1; j <= degree; ++j) {
        p.a[j - 1] = 2.0 * bins[j].real();
        p.b[j - 1] = -2.0 * bins[j].imag();
    }
    return p;
}

BoundaryLoop analyze(const CMat& samples, const FourierGrid& grid) {
    grid.validate();
    if (samples.cols() != grid.size)
        throw std::invalid_argument("sample count " + std::to_string(samples.cols()) +
                                    " does not match grid size " + std::to_string(grid.size));
    BoundaryLoop loop(static_cast<int>(samples.rows()), grid);
    std::vector<cplx> row(grid.size);
    for (int j = 0; j < samples.rows(); ++j) {
        for (int i = 0; i < grid.size; ++i) row[i] = samples(j, i);
        auto bins = dft(row);
        for (int k = -grid.degree; k <= grid.degree; ++k)
            loop.coeff(j, k) = bins[(k + grid.size) % grid.size];
    }
    return loop;
}

HolomorphicSplit holomorphic_split(const BoundaryLoop& loop) {
    const int n_deg = loop.degree();
    CMat c(loop.dimension(), n_deg + 1);
    double neg = 0.0;
    for (int j = 0; j < loop.dimension(); ++j) {
        for (int k = 0; k <= n_deg; ++k) c(j, k) = loop.coeff(j, k);
        for (int k = 1; k <= n_deg; ++k) neg += std::norm(loop.coeff(j, -k));
    }
    return {AnalyticDisc(std::move(c)), std::sqrt(neg)};
}

RealTrigPoly conjugate(const RealTrigPoly& u) {
    // cos j t -> sin j t, sin j t -> -cos j t; the constant fixes the value at t = 0.
    RealTrigPoly v(u.degree());
    double at_zero = 0.0;
    for (int j = 0; j < u.degree(); ++j) {
        v.a[j] = -u.b[j];
        v.b[j] = u.a[j];
        at_zero += v.a[j];
    }
    v.a0 = -at_zero;
    return v;
}

}  // namespace plurikernel
