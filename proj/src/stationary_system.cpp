#include "stationary_system.hpp"

#include <cmath>
#include <vector>

namespace plurikernel::detail {

namespace {

// d^order/dzeta^order of zeta^k for k = 0..degree.
std::vector<cplx> monomial_derivatives(int degree, cplx zeta, int order) {
    std::vector<cplx> out(degree + 1, cplx{});
    for (int k = order; k <= degree; ++k) {
        double falling = 1.0;
        for (int i = 0; i < order; ++i) falling *= static_cast<double>(k - i);
        out[k] = falling * std::pow(zeta, k - order);
    }
    return out;
}

CVec poly_eval(const CMat& c, cplx zeta, int order) {
    CVec out = CVec::Zero(c.rows());
    for (int k = static_cast<int>(c.cols()) - 1; k >= order; --k) {
        double falling = 1.0;
        for (int i = 0; i < order; ++i) falling *= static_cast<double>(k - i);
        out = out * zeta + falling * c.col(k);
    }
    return out;
}

std::vector<cplx> row_dft(const CMat& m, int row) {
    std::vector<cplx> v(m.cols());
    for (Eigen::Index i = 0; i < m.cols(); ++i) v[i] = m(row, i);
    return dft(v);
}

}  // namespace

int Regime::extras() const {
    switch (kind) {
        case Kind::two_point:
        case Kind::direction: return 1;
        case Kind::chl_through: return 2;
        case Kind::two_point_balanced: return 3;
        default: return 0;
    }
}

int Regime::rows(int n) const {
    switch (kind) {
        case Kind::chl: return 4 * n + 1;
        case Kind::chl_through: return 4 * n + 3;
        case Kind::two_point_balanced: return 4 * n + 2;
        default: return 4 * n;
    }
}

StationarySystem::StationarySystem(DomainSpec spec, FourierGrid grid, Regime regime)
    : spec_(std::move(spec)), grid_(grid), regime_(std::move(regime)), n_(spec_.dimension()) {
    grid_.validate();
    if (regime_.kind == Regime::Kind::two_point_balanced && (grid_.degree < 2 || regime_.weights.size() != n_))
        throw std::invalid_argument("balanced pair regime needs degree >= 2 and n gauge weights");
}

int StationarySystem::residual_size() const {
    const int m = grid_.size;
    return m + 2 * n_ * (m / 2 - 1) + 2 + regime_.rows(n_);
}

CMat StationarySystem::coefficients(const RVec& x) const {
    const int deg = grid_.degree;
    CMat c(n_, deg + 1);
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k <= deg; ++k) {
            const int col = 2 * (j * (deg + 1) + k);
            c(j, k) = cplx(x(col), x(col + 1));
        }
    return c;
}

RealTrigPoly StationarySystem::log_mu(const RVec& x) const {
    const int deg = grid_.degree;
    RealTrigPoly q(deg);
    const int off = coeff_count();
    q.a0 = x(off);
    for (int k = 1; k <= deg; ++k) {
        q.a[k - 1] = x(off + 2 * k - 1);
        q.b[k - 1] = x(off + 2 * k);
    }
    return q;
}

RVec StationarySystem::pack(const CMat& coeffs, const RealTrigPoly& q) const {
    const int deg = grid_.degree;
    RVec x = RVec::Zero(unknowns());
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k <= deg && k < coeffs.cols(); ++k) {
            const int col = 2 * (j * (deg + 1) + k);
            x(col) = coeffs(j, k).real();
            x(col + 1) = coeffs(j, k).imag();
        }
    const int off = coeff_count();
    x(off) = q.a0;
    for (int k = 1; k <= deg && k <= q.degree(); ++k) {
        x(off + 2 * k - 1) = q.a[k - 1];
        x(off + 2 * k) = q.b[k - 1];
    }
    return x;
}

RVec StationarySystem::evaluate(const RVec& x, RMat* jac) const {
    using Kind = Regime::Kind;
    const int deg = grid_.degree;
    const int m_size = grid_.size;
    const int n = n_;
    const int half = m_size / 2 - 1;
    const double wb = 1.0 / std::sqrt(static_cast<double>(m_size));

    const CMat c = coefficients(x);
    const AnalyticDisc disc(c);
    const CMat bv = disc.boundary_values(m_size);
    const RVec qv = log_mu(x).samples(m_size);

    std::vector<double> rvals(m_size);
    CMat dr(n, m_size), g(n, m_size);
    std::vector<cplx> emu(m_size);
    // Holomorphic/antiholomorphic second derivatives of r, scaled by e^{it} mu.
    CMat a_fun, b_fun;
    if (jac) {
        a_fun.resize(n * n, m_size);
        b_fun.resize(n * n, m_size);
    }
    for (int m = 0; m < m_size; ++m) {
        const CVec z = bv.col(m);
        rvals[m] = spec_.r(z);
        dr.col(m) = spec_.grad(z);
        emu[m] = std::polar(std::exp(qv(m)), grid_.angle(m));
        g.col(m) = emu[m] * dr.col(m);
        if (jac) {
            const RMat h = spec_.real_hessian(z);
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    const double rxx = h(2 * j, 2 * l), rxy = h(2 * j, 2 * l + 1);
                    const double ryx = h(2 * j + 1, 2 * l), ryy = h(2 * j + 1, 2 * l + 1);
                    const cplx hol(0.25 * (rxx - ryy), -0.25 * (rxy + ryx));
                    const cplx mix(0.25 * (rxx + ryy), 0.25 * (rxy - ryx));
                    a_fun(j * n + l, m) = emu[m] * hol;
                    b_fun(j * n + l, m) = emu[m] * mix;
                }
        }
    }

    std::vector<std::vector<cplx>> ghat(n);
    for (int j = 0; j < n; ++j) ghat[j] = row_dft(g, j);

    const int rows = residual_size();
    RVec res(rows);
    int row = 0;
    for (int m = 0; m < m_size; ++m) res(row++) = wb * rvals[m];
    for (int j = 0; j < n; ++j)
        for (int kappa = 1; kappa <= half; ++kappa) {
            const cplx val = ghat[j][m_size - kappa];
            res(row++) = val.real();
            res(row++) = val.imag();
        }
    cplx norm1 = -1.0;
    for (int j = 0; j < n; ++j) norm1 += ghat[j][0] * c(j, 1);
    res(row++) = norm1.real();
    res(row++) = norm1.imag();
    const int regime_row0 = row;

    const Regime& rg = regime_;
    const int xo = extras_offset();

    // Regime residuals.
    auto put_vec = [&](const CVec& v) {
        for (int l = 0; l < n; ++l) {
            res(row++) = v(l).real();
            res(row++) = v(l).imag();
        }
    };
    switch (rg.kind) {
        case Kind::two_point:
            put_vec(poly_eval(c, 0.0, 0) - rg.z);
            put_vec(poly_eval(c, x(xo), 0) - rg.w);
            break;
        case Kind::two_point_boundary:
            put_vec(poly_eval(c, 0.0, 0) - rg.z);
            put_vec(poly_eval(c, 1.0, 0) - rg.w);
            break;
        case Kind::two_point_balanced: {
            const cplx za(x(xo), x(xo + 1));
            put_vec(poly_eval(c, za, 0) - rg.z);
            put_vec(poly_eval(c, za + x(xo + 2), 0) - rg.w);
            cplx gauge = 0.0;
            for (int l = 0; l < n; ++l) gauge += rg.weights(l) * c(l, 2) * std::conj(c(l, 1));
            res(row++) = gauge.real();
            res(row++) = gauge.imag();
            break;
        }
        case Kind::direction:
            put_vec(poly_eval(c, 0.0, 0) - rg.z);
            put_vec(poly_eval(c, 0.0, 1) - x(xo) * rg.v);
            break;
        case Kind::chl: {
            put_vec(poly_eval(c, 1.0, 0) - rg.p);
            put_vec(poly_eval(c, 1.0, 1) - hermitian(rg.v, rg.nu) * rg.v);
            res(row++) = hermitian(poly_eval(c, 1.0, 2), rg.nu).imag();
            break;
        }
        case Kind::chl_through: {
            const cplx zeta(x(xo), x(xo + 1));
            put_vec(poly_eval(c, 1.0, 0) - rg.p);
            put_vec(poly_eval(c, zeta, 0) - rg.z);
            const CVec d1 = poly_eval(c, 1.0, 1);
            const cplx e1 = hermitian(d1, rg.nu) - d1.squaredNorm();
            res(row++) = e1.real();
            res(row++) = e1.imag();
            res(row++) = hermitian(poly_eval(c, 1.0, 2), rg.nu).imag();
            break;
        }
    }

    if (!jac) return res;

    RMat& jm = *jac;
    jm.setZero(rows, unknowns());
    auto col_re = [deg](int l, int k) { return 2 * (l * (deg + 1) + k); };
    auto wrap = [m_size](int k) { return ((k % m_size) + m_size) % m_size; };

    // Boundary rows.
    for (int m = 0; m < m_size; ++m) {
        const double th = grid_.angle(m);
        for (int l = 0; l < n; ++l)
            for (int k = 0; k <= deg; ++k) {
                const cplx v = dr(l, m) * std::polar(1.0, k * th);
                jm(m, col_re(l, k)) = wb * 2.0 * v.real();
                jm(m, col_re(l, k) + 1) = -wb * 2.0 * v.imag();
            }
    }

    std::vector<std::vector<cplx>> ahat(n * n), bhat(n * n);
    for (int jl = 0; jl < n * n; ++jl) {
        ahat[jl] = row_dft(a_fun, jl);
        bhat[jl] = row_dft(b_fun, jl);
    }

    const int q0 = coeff_count();
    // Dual rows: bin -kappa of component j.
    auto dual_entries = [&](RMat& dst, int j, int bin, int r_re, int r_im) {
        for (int l = 0; l < n; ++l)
            for (int k = 0; k <= deg; ++k) {
                const cplx av = ahat[j * n + l][wrap(bin - k)];
                const cplx bv2 = bhat[j * n + l][wrap(bin + k)];
                const cplx dre = av + bv2;
                const cplx dim = cplx(0.0, 1.0) * (av - bv2);
                dst(r_re, col_re(l, k)) += dre.real();
                dst(r_im, col_re(l, k)) += dre.imag();
                dst(r_re, col_re(l, k) + 1) += dim.real();
                dst(r_im, col_re(l, k) + 1) += dim.imag();
            }
        dst(r_re, q0) += ghat[j][wrap(bin)].real();
        dst(r_im, q0) += ghat[j][wrap(bin)].imag();
        for (int k = 1; k <= deg; ++k) {
            const cplx lo = ghat[j][wrap(bin - k)];
            const cplx hi = ghat[j][wrap(bin + k)];
            const cplx cs = 0.5 * (lo + hi);
            const cplx sn = (lo - hi) / cplx(0.0, 2.0);
            dst(r_re, q0 + 2 * k - 1) += cs.real();
            dst(r_im, q0 + 2 * k - 1) += cs.imag();
            dst(r_re, q0 + 2 * k) += sn.real();
            dst(r_im, q0 + 2 * k) += sn.imag();
        }
    };

    row = m_size;
    for (int j = 0; j < n; ++j)
        for (int kappa = 1; kappa <= half; ++kappa) {
            dual_entries(jm, j, -kappa, row, row + 1);
            row += 2;
        }

    // Norm rows: d(sum_j ghat_j[0] c_{j1}).
    {
        RMat scratch(2, unknowns());
        for (int j = 0; j < n; ++j) {
            scratch.setZero();
            dual_entries(scratch, j, 0, 0, 1);
            const cplx w = c(j, 1);
            for (int col = 0; col < unknowns(); ++col) {
                const cplx prod = cplx(scratch(0, col), scratch(1, col)) * w;
                jm(row, col) += prod.real();
                jm(row + 1, col) += prod.imag();
            }
            const cplx gj0 = ghat[j][0];
            jm(row, col_re(j, 1)) += gj0.real();
            jm(row + 1, col_re(j, 1)) += gj0.imag();
            jm(row, col_re(j, 1) + 1) -= gj0.imag();
            jm(row + 1, col_re(j, 1) + 1) += gj0.real();
        }
    }
    row = regime_row0;

    // Regime rows.
    auto vec_rows = [&](int order, cplx zeta) {
        const auto basis = monomial_derivatives(deg, zeta, order);
        for (int l = 0; l < n; ++l) {
            for (int k = 0; k <= deg; ++k) {
                const cplx d = basis[k];
                jm(row + 2 * l, col_re(l, k)) = d.real();
                jm(row + 2 * l + 1, col_re(l, k)) = d.imag();
                jm(row + 2 * l, col_re(l, k) + 1) = -d.imag();
                jm(row + 2 * l + 1, col_re(l, k) + 1) = d.real();
            }
        }
    };
    auto extra_col = [&](int col, const CVec& d) {
        for (int l = 0; l < n; ++l) {
            jm(row + 2 * l, col) += d(l).real();
            jm(row + 2 * l + 1, col) += d(l).imag();
        }
    };

    switch (rg.kind) {
        case Kind::two_point: {
            vec_rows(0, 0.0);
            row += 2 * n;
            const double t = x(xo);
            vec_rows(0, t);
            extra_col(xo, poly_eval(c, t, 1));
            row += 2 * n;
            break;
        }
        case Kind::two_point_boundary:
            vec_rows(0, 0.0);
            row += 2 * n;
            vec_rows(0, 1.0);
            row += 2 * n;
            break;
        case Kind::two_point_balanced: {
            const cplx za(x(xo), x(xo + 1));
            const cplx zb = za + x(xo + 2);
            vec_rows(0, za);
            CVec d = poly_eval(c, za, 1);
            extra_col(xo, d);
            extra_col(xo + 1, cplx(0.0, 1.0) * d);
            row += 2 * n;
            vec_rows(0, zb);
            d = poly_eval(c, zb, 1);
            extra_col(xo, d);
            extra_col(xo + 1, cplx(0.0, 1.0) * d);
            extra_col(xo + 2, d);
            row += 2 * n;
            for (int l = 0; l < n; ++l) {
                const double a = rg.weights(l);
                const cplx d1 = a * std::conj(c(l, 1));
                const cplx d2 = a * c(l, 2);
                const cplx cols[4] = {d1, cplx(0.0, 1.0) * d1, d2, cplx(0.0, -1.0) * d2};
                const int idx[4] = {col_re(l, 2), col_re(l, 2) + 1, col_re(l, 1), col_re(l, 1) + 1};
                for (int q = 0; q < 4; ++q) {
                    jm(row, idx[q]) += cols[q].real();
                    jm(row + 1, idx[q]) += cols[q].imag();
                }
            }
            row += 2;
            break;
        }
        case Kind::direction:
            vec_rows(0, 0.0);
            row += 2 * n;
            vec_rows(1, 0.0);
            extra_col(xo, -rg.v);
            row += 2 * n;
            break;
        case Kind::chl:
        case Kind::chl_through: {
            vec_rows(0, 1.0);
            row += 2 * n;
            if (rg.kind == Kind::chl) {
                vec_rows(1, 1.0);
                row += 2 * n;
            } else {
                const cplx zeta(x(xo), x(xo + 1));
                vec_rows(0, zeta);
                const CVec d = poly_eval(c, zeta, 1);
                extra_col(xo, d);
                extra_col(xo + 1, cplx(0.0, 1.0) * d);
                row += 2 * n;
                const CVec d1 = poly_eval(c, 1.0, 1);
                for (int l = 0; l < n; ++l)
                    for (int k = 1; k <= deg; ++k) {
                        const double kk = k;
                        const cplx nb = std::conj(rg.nu(l));
                        const cplx dre = kk * nb - 2.0 * kk * d1(l).real();
                        const cplx dim = cplx(0.0, kk) * nb - 2.0 * kk * d1(l).imag();
                        jm(row, col_re(l, k)) = dre.real();
                        jm(row + 1, col_re(l, k)) = dre.imag();
                        jm(row, col_re(l, k) + 1) = dim.real();
                        jm(row + 1, col_re(l, k) + 1) = dim.imag();
                    }
                row += 2;
            }
            for (int l = 0; l < n; ++l)
                for (int k = 2; k <= deg; ++k) {
                    const double kk = static_cast<double>(k) * (k - 1);
                    const cplx nb = std::conj(rg.nu(l));
                    jm(row, col_re(l, k)) = (kk * nb).imag();
                    jm(row, col_re(l, k) + 1) = (cplx(0.0, kk) * nb).imag();
                }
            row += 1;
            break;
        }
    }
    return res;
}

NewtonResult gauss_newton(const StationarySystem& sys, RVec x, double tol, int max_iter,
                          double min_damping) {
    using Kind = Regime::Kind;
    const int xo = sys.extras_offset();
    const Kind kind = sys.regime().kind;
    auto feasible = [&](const RVec& y) {
        if (!y.allFinite()) return false;
        if (kind == Kind::two_point) return y(xo) > 0.0 && y(xo) < 1.0;
        if (kind == Kind::direction) return y(xo) > 0.0;
        if (kind == Kind::chl_through) return std::hypot(y(xo), y(xo + 1)) < 1.0;
        if (kind == Kind::two_point_balanced)
            return y(xo + 2) > 0.0 && std::hypot(y(xo), y(xo + 1)) < 1.0 && std::hypot(y(xo) + y(xo + 2), y(xo + 1)) < 1.0;
        return true;
    };

    NewtonResult out;
    RMat jac;
    RVec res = sys.evaluate(x, &jac);
    double rn = res.norm();
    int polish = 0;
    int it = 0;
    for (; it < max_iter; ++it) {
        if (rn <= tol && polish >= 2) break;
        const RVec dx = jac.householderQr().solve(-res);
        if (!dx.allFinite()) break;
        if (rn <= tol) {
            ++polish;
            if (dx.lpNorm<Eigen::Infinity>() < 1e-14 * (1.0 + x.lpNorm<Eigen::Infinity>())) break;
        }
        double alpha = 1.0;
        bool accepted = false;
        RVec xn;
        RVec rnew;
        while (alpha >= min_damping) {
            xn = x + alpha * dx;
            if (feasible(xn)) {
                rnew = sys.evaluate(xn, nullptr);
                const double rnn = rnew.norm();
                if (std::isfinite(rnn) && (rnn < rn || rnn <= rn * (1.0 + 1e-6) + 1e-15)) {
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        // Levenberg-Marquardt steps when the Gauss-Newton direction stalls
        if (!accepted) {
            const RMat jtj = jac.transpose() * jac;
            const RVec g = jac.transpose() * res;
            const RVec scale = jtj.diagonal().cwiseMax(1e-12);
            for (double lambda = 1e-6; lambda <= 1e6 && !accepted; lambda *= 10.0) {
                RMat m = jtj;
                m.diagonal() += lambda * scale;
                xn = x - m.ldlt().solve(g);
                if (!feasible(xn)) continue;
                rnew = sys.evaluate(xn, nullptr);
                accepted = std::isfinite(rnew.norm()) && rnew.norm() < rn;
            }
        }
        if (!accepted) break;
        x = xn;
        res = sys.evaluate(x, &jac);
        rn = res.norm();
    }
    out.x = std::move(x);
    out.residual = rn;
    out.iterations = it;
    out.converged = rn <= tol;
    return out;
}

}  // namespace plurikernel::detail
