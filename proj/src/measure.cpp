#include "plurikernel/measure.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <thread>

#include <boost/math/special_functions/legendre.hpp>

#include "plurikernel/kernels.hpp"

namespace plurikernel {

namespace {

// Complex Hessian d^2 r / dz_j dzbar_k from the interleaved real Hessian.
CMat levi_from_real(const RMat& h) {
    const auto n = h.rows() / 2;
    CMat out(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            out(j, k) = cplx(0.25 * (h(2 * j, 2 * k) + h(2 * j + 1, 2 * k + 1)),
                             0.25 * (h(2 * j, 2 * k + 1) - h(2 * j + 1, 2 * k)));
    return out;
}

int parity(const std::vector<int>& perm) {
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign;
}

struct Rule {
    std::vector<double> x, w;
};

Rule gauss_legendre(int m) {
    Rule r;
    const auto zeros = boost::math::legendre_p_zeros<double>(m);
    for (double z : zeros) {
        const double dp = boost::math::legendre_p_prime(m, z);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        if (z == 0.0) {
            r.x.push_back(0.0);
            r.w.push_back(w);
        } else {
            r.x.push_back(-z);
            r.w.push_back(w);
            r.x.push_back(z);
            r.w.push_back(w);
        }
    }
    std::vector<std::size_t> idx(r.x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return r.x[a] < r.x[b]; });
    Rule sorted;
    for (auto i : idx) {
        sorted.x.push_back(r.x[i]);
        sorted.w.push_back(r.w[i]);
    }
    return sorted;
}

// sqrt(det(J^T J)) for the chart derivative columns.
double volume(const RMat& jac) { return std::sqrt(std::abs((jac.transpose() * jac).determinant())); }

double kernel_power(double v, int n) { return std::pow(std::abs(v), n); }

}  // namespace

double omega_density(const RVec& real_grad, const RMat& real_hess, const RMat& frame) {
    const auto dim = real_grad.size();
    if (dim % 2 != 0 || real_hess.rows() != dim || real_hess.cols() != dim)
        throw std::invalid_argument("gradient and Hessian sizes disagree");
    if (frame.rows() != dim || frame.cols() != dim - 1) throw std::invalid_argument("frame has the wrong shape");
    if (std::abs((frame.transpose() * frame).determinant()) < 1e-24) throw std::invalid_argument("degenerate frame");
    const int n = static_cast<int>(dim / 2);
    const CMat levi = levi_from_real(real_hess);
    // d^c r(X) = sum (g_x X_y - g_y X_x)
    auto dc = [&](int c) {
        double v = 0.0;
        for (int j = 0; j < n; ++j)
            v += real_grad(2 * j) * frame(2 * j + 1, c) - real_grad(2 * j + 1) * frame(2 * j, c);
        return v;
    };
    // dd^c r(X, Y) = -4 Im sum H_jk X_j conj(Y_k)
    auto ddc = [&](int a, int b) {
        const CVec x = from_real(frame.col(a)), y = from_real(frame.col(b));
        return -4.0 * (x.transpose() * levi * y.conjugate()).value().imag();
    };
    const int m = 2 * n - 1;
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    do {
        double term = parity(perm) * dc(perm[m - 1]);
        for (int i = 0; i + 1 < m; i += 2) term *= ddc(perm[i], perm[i + 1]);
        sum += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    double norm = 1.0;
    for (int k = 1; k < n; ++k) norm *= 2.0 * k;  // 2^{n-1} (n-1)!
    return sum / norm / std::pow(real_grad.norm(), n);
}

double omega_density(const DomainSpec& spec, const BoundaryPoint& node) {
    return omega_density(spec.real_grad(node.p), spec.real_hessian(node.p), node.frame);
}

double QuadratureGrid::omega_mass() const {
    double s = 0.0;
    for (const auto& q : nodes) s += q.weight * q.density;
    return s;
}

int QuadratureGrid::slice_size() const { return spec.dimension() == 1 ? resolution : resolution * resolution; }

QuadratureGrid build_grid(const DomainSpec& spec, int resolution) {
    if (!spec.is_quadric()) throw std::invalid_argument("quadrature grids need a ball or ellipsoid");
    const int n = spec.dimension();
    if (n != 1 && n != 2) throw std::invalid_argument("quadrature grids support dimension 1 or 2");
    if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
    QuadratureGrid g;
    g.spec = spec;
    g.resolution = resolution;
    const double h = 2.0 * kPi / resolution;
    const auto& a = spec.axes();
    auto add = [&](const CVec& p, const RMat& jac, double rule_w, double s, double al, double be) {
        QuadratureNode q;
        q.point = normal(spec, p);
        q.weight = rule_w * volume(jac);
        q.density = omega_density(spec, q.point);
        q.s = s;
        q.alpha = al;
        q.beta = be;
        g.nodes.push_back(std::move(q));
    };
    if (n == 1) {
        const double r1 = 1.0 / std::sqrt(a[0]);
        for (int i = 0; i < resolution; ++i) {
            const double al = i * h;
            CVec p(1);
            p(0) = std::polar(r1, al);
            RMat jac(2, 1);
            jac.col(0) = to_real(CVec::Constant(1, cplx(0.0, 1.0) * p(0)));
            add(p, jac, h, 0.0, al, 0.0);
        }
        return g;
    }
    const Rule rule = gauss_legendre(resolution);
    for (int is = 0; is < resolution; ++is) {
        const double s = rule.x[is];
        const double m1 = std::sqrt(0.5 * (1.0 + s)), m2 = std::sqrt(0.5 * (1.0 - s));
        const double c1 = 1.0 / std::sqrt(a[0]), c2 = 1.0 / std::sqrt(a[1]);
        for (int ia = 0; ia < resolution; ++ia)
            for (int ib = 0; ib < resolution; ++ib) {
                const double al = ia * h, be = ib * h;
                const cplx e1 = std::polar(1.0, al), e2 = std::polar(1.0, be);
                CVec p(2), ds(2), da(2), db(2);
                p << c1 * m1 * e1, c2 * m2 * e2;
                ds << c1 * e1 / (4.0 * m1), -c2 * e2 / (4.0 * m2);
                da << cplx(0.0, 1.0) * p(0), 0.0;
                db << 0.0, cplx(0.0, 1.0) * p(1);
                RMat jac(4, 3);
                jac << to_real(ds), to_real(da), to_real(db);
                add(p, jac, rule.w[is] * h * h, s, al, be);
            }
    }
    return g;
}

NormalizationConstant calibrate_kappa(int n, int resolution) {
    const DomainSpec ball = DomainSpec::ball(n);
    const double m1 = build_grid(ball, resolution).omega_mass();
    const double m2 = build_grid(ball, 2 * resolution).omega_mass();
    NormalizationConstant k;
    k.n = n;
    k.omega_mass = m2;
    k.kappa = 1.0 / m2;
    k.drift = std::abs(m2 - m1) / std::abs(m2);
    if (!(k.drift <= 1e-6)) throw NumericalError("omega mass of the sphere does not converge");
    return k;
}

double PluriharmonicFunction::operator()(const CVec& z) const {
    cplx h = 0.0;
    for (const auto& t : terms) {
        cplx m = t.coef;
        for (std::size_t j = 0; j < t.powers.size(); ++j) m *= std::pow(z(static_cast<Eigen::Index>(j)), t.powers[j]);
        h += m;
    }
    return h.real() + constant;
}

void PluriharmonicFunction::validate(int n) const {
    for (const auto& t : terms) {
        if (static_cast<int>(t.powers.size()) != n) throw std::invalid_argument("term arity differs from dimension");
        for (int e : t.powers)
            if (e < 0) throw std::invalid_argument("negative exponent: not pluriharmonic on the domain");
    }
}

PluriharmonicFunction PluriharmonicFunction::constant_function(double c) { return {{}, c}; }

KernelSamples sample_kernel(const QuadratureGrid& grid, const CVec& z, const MeasureOptions& opts) {
    const DomainSpec& spec = grid.spec;
    if (z.size() != spec.dimension()) throw std::invalid_argument("z: dimension mismatch");
    if (!(spec.r(z) < 0.0)) throw std::invalid_argument("z is not an interior point");
    if (opts.workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (opts.source == KernelSource::closed_form && !spec.is_quadric())
        throw std::invalid_argument("closed-form kernels need a quadric domain");
    KernelSamples out;
    out.z = z;
    const std::size_t count = grid.nodes.size();
    out.values.assign(count, 0.0);
    out.skipped.assign(count, 0);
    const int slice = grid.slice_size();
    const int slices = static_cast<int>(count) / slice;

    auto run_slice = [&](int si) {
        std::optional<GeodesicDisc> prev;
        for (int k = si * slice; k < (si + 1) * slice; ++k) {
            const CVec& p = grid.nodes[k].point.p;
            if ((p - z).norm() < 1e-6) {
                out.skipped[k] = 1;
                continue;
            }
            if (opts.source == KernelSource::closed_form) {
                out.values[k] = std::abs(quadric_poisson(spec, p, z));
            } else {
                const ChlSolve cs = chl_solve(spec, p, z, opts.solver, prev ? &*prev : nullptr);
                out.values[k] = std::abs(poisson_from(cs.data, grid.nodes[k].point.normal));
                prev = cs.disc;
            }
        }
    };

    const int workers = std::min(opts.workers, slices);
    if (workers <= 1) {
        for (int si = 0; si < slices; ++si) run_slice(si);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (int si = w; si < slices; si += workers) run_slice(si);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    out.skipped_count = static_cast<int>(std::count(out.skipped.begin(), out.skipped.end(), 1));
    return out;
}

ReproduceReport reproduce_pluriharmonic(const PluriharmonicFunction& f, const QuadratureGrid& grid,
                                        const KernelSamples& samples, const NormalizationConstant& kappa) {
    const int n = grid.spec.dimension();
    f.validate(n);
    if (kappa.n != n) throw std::invalid_argument("normalization constant is for another dimension");
    if (samples.values.size() != grid.nodes.size()) throw std::invalid_argument("samples do not match the grid");
    ReproduceReport rep;
    double sum = 0.0;
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
        if (samples.skipped[k]) continue;
        const auto& q = grid.nodes[k];
        sum += q.weight * kernel_power(samples.values[k], n) * f(q.point.p) * q.density;
    }
    rep.estimate = kappa.kappa * sum;
    rep.reference = f(samples.z);
    rep.error = std::abs(rep.estimate - rep.reference);
    rep.skipped = samples.skipped_count;
    rep.nodes = static_cast<int>(grid.nodes.size());
    return rep;
}

ReproduceReport reproduce_pluriharmonic(const DomainSpec& spec, const PluriharmonicFunction& f, const CVec& z,
                                        const QuadratureGrid& grid, const MeasureOptions& opts) {
    if (!(grid.spec == spec)) throw std::invalid_argument("grid was built for another domain");
    f.validate(spec.dimension());
    return reproduce_pluriharmonic(f, grid, sample_kernel(grid, z, opts), calibrate_kappa(spec.dimension()));
}

double demailly_mass(const QuadratureGrid& grid, const KernelSamples& samples, const NormalizationConstant& kappa) {
    return reproduce_pluriharmonic(PluriharmonicFunction::constant_function(1.0), grid, samples, kappa).estimate;
}

double demailly_mass(const DomainSpec& spec, const CVec& z, const QuadratureGrid& grid, const MeasureOptions& opts) {
    return reproduce_pluriharmonic(spec, PluriharmonicFunction::constant_function(1.0), z, grid, opts).estimate;
}

void write_node_csv(std::ostream& os, const QuadratureGrid& grid, const KernelSamples& samples) {
    const int n = grid.spec.dimension();
    os << "s,alpha,beta";
    for (int j = 1; j <= n; ++j) os << ",re_p" << j << ",im_p" << j;
    os << ",weight,density,kernel,skipped\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
        const auto& q = grid.nodes[k];
        put(q.s);
        os << ',';
        put(q.alpha);
        os << ',';
        put(q.beta);
        for (int j = 0; j < n; ++j) {
            os << ',';
            put(q.point.p(j).real());
            os << ',';
            put(q.point.p(j).imag());
        }
        os << ',';
        put(q.weight);
        os << ',';
        put(q.density);
        os << ',';
        put(samples.values[k]);
        os << ',' << int(samples.skipped[k]) << '\n';
    }
}

}  // namespace plurikernel
