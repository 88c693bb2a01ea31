#include "plurikernel/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace plurikernel {

std::string library_version() { return PLURIKERNEL_VERSION; }

Json to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const CVec& v) {
    Json out = Json::array();
    for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(to_json(v(j)));
    return out;
}

cplx complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

CVec cvec_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("complex vector must be an array");
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

namespace {

std::vector<double> numbers(const Json& j, const char* what) {
    if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
    std::vector<double> out;
    for (const auto& x : j) {
        if (!x.is_number()) throw std::invalid_argument(std::string(what) + " must hold numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field ") + key);
    return j.at(key);
}

void write(std::string& out, const Json& j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += Json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                write(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // arrays of scalars stay on one line
            bool flat = true;
            for (const auto& x : j) flat = flat && !x.is_structured();
            if (!flat && j.size() == 2 && j[0].is_number()) flat = true;
            out += '[';
            bool first = true;
            for (const auto& x : j) {
                if (!first) out += flat && indent >= 0 ? ", " : ",";
                first = false;
                if (!flat) newline(depth + 1);
                write(out, x, flat ? -1 : indent, depth + 1);
            }
            if (!flat) newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

Json to_json(const DomainSpec& spec) {
    Json j;
    switch (spec.kind()) {
        case DomainKind::ball:
            j["kind"] = "ball";
            j["n"] = spec.dimension();
            return j;
        case DomainKind::ellipsoid:
            j["kind"] = "ellipsoid";
            j["a"] = spec.axes();
            return j;
        case DomainKind::perturbed_ellipsoid:
            j["kind"] = "perturbed_ellipsoid";
            j["a"] = spec.axes();
            j["eps"] = spec.eps();
            j["bump"] = Json::array();
            for (const auto& m : spec.bump()) j["bump"].push_back({{"coef", m.coef}, {"powers", m.powers}});
            return j;
    }
    return j;
}

DomainSpec domain_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("domain must be a JSON object");
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "ball") {
        const Json& n = field(j, "n");
        if (!n.is_number_integer()) throw std::invalid_argument("n must be an integer");
        return DomainSpec::ball(n.get<int>());
    }
    if (kind != "ellipsoid" && kind != "perturbed_ellipsoid") throw std::invalid_argument("unknown domain kind " + kind);
    std::vector<double> a = numbers(field(j, "a"), "a");
    if (kind == "ellipsoid" && !j.contains("eps") && !j.contains("bump")) return DomainSpec::ellipsoid(std::move(a));
    const double eps = field(j, "eps").get<double>();
    std::vector<Monomial> bump;
    const Json& terms = field(j, "bump");
    if (!terms.is_array()) throw std::invalid_argument("bump must be an array");
    for (const auto& t : terms) {
        Monomial m;
        m.coef = field(t, "coef").get<double>();
        for (const auto& e : field(t, "powers")) {
            if (!e.is_number_integer()) throw std::invalid_argument("powers must be integers");
            m.powers.push_back(e.get<int>());
        }
        bump.push_back(std::move(m));
    }
    return DomainSpec::perturbed_ellipsoid(std::move(a), eps, std::move(bump));
}

DomainSpec load_domain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open domain file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("malformed domain file " + path + ": " + e.what());
    }
    try {
        return domain_from_json(j);
    } catch (const Json::exception& e) {
        throw std::invalid_argument("malformed domain file " + path + ": " + e.what());
    }
}

Json to_json(const SolverConfig& cfg) {
    return {{"modes", cfg.modes},
            {"grid", cfg.fourier().size},
            {"newton_tol", cfg.newton_tol},
            {"max_iter", cfg.max_iter},
            {"min_damping", cfg.min_damping},
            {"homotopy_steps", cfg.homotopy_steps},
            {"seed", cfg.seed},
            {"initial_perturbation", cfg.initial_perturbation}};
}

Json to_json(const ResidualReport& r) {
    return {{"boundary_defect", r.boundary_defect},
            {"dual_defect", r.dual_defect},
            {"norm_defect", r.norm_defect},
            {"mu_min", r.mu_min},
            {"newton_residual", r.newton_residual},
            {"spectral_tail", r.spectral_tail},
            {"under_resolved", r.under_resolved},
            {"iterations", r.iterations},
            {"homotopy_steps", r.homotopy_steps},
            {"converged", r.converged}};
}

Json to_json(const Parametrization& meta) {
    return std::visit(
        [](const auto& m) -> Json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TwoPointParams>)
                return {{"kind", "two_point"}, {"z", to_json(m.z)}, {"w", to_json(m.w)}, {"t", m.t}};
            else if constexpr (std::is_same_v<T, DirectionParams>)
                return {{"kind", "direction"}, {"z", to_json(m.z)}, {"v", to_json(m.v)}, {"t", m.t}};
            else if constexpr (std::is_same_v<T, ChlParams>)
                return {{"kind", "chl"}, {"p", to_json(m.p)}, {"v", to_json(m.v)}};
            else if constexpr (std::is_same_v<T, ChlThroughParams>)
                return {{"kind", "chl_through"}, {"p", to_json(m.p)}, {"z", to_json(m.z)}, {"zeta", to_json(m.zeta)}};
            else
                return {{"kind", "pair"},
                        {"z", to_json(m.z)},
                        {"w", to_json(m.w)},
                        {"zeta_z", to_json(m.zeta_z)},
                        {"zeta_w", to_json(m.zeta_w)}};
        },
        meta);
}

Parametrization parametrization_from_json(const Json& j) {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "two_point")
        return TwoPointParams{cvec_from_json(field(j, "z")), cvec_from_json(field(j, "w")), field(j, "t").get<double>()};
    if (kind == "direction")
        return DirectionParams{cvec_from_json(field(j, "z")), cvec_from_json(field(j, "v")),
                               field(j, "t").get<double>()};
    if (kind == "chl") return ChlParams{cvec_from_json(field(j, "p")), cvec_from_json(field(j, "v"))};
    if (kind == "chl_through")
        return ChlThroughParams{cvec_from_json(field(j, "p")), cvec_from_json(field(j, "z")),
                                complex_from_json(field(j, "zeta"))};
    if (kind == "pair")
        return PairParams{cvec_from_json(field(j, "z")), cvec_from_json(field(j, "w")),
                          complex_from_json(field(j, "zeta_z")), complex_from_json(field(j, "zeta_w"))};
    throw std::invalid_argument("unknown parametrization kind " + kind);
}

Json to_json(const GeodesicDisc& g) {
    Json coeffs = Json::array();
    for (int c = 0; c < g.phi.dimension(); ++c) coeffs.push_back(to_json(CVec(g.phi.coeffs().row(c).transpose())));
    return {{"version", library_version()},
            {"domain", to_json(g.spec)},
            {"grid", {{"degree", g.grid.degree}, {"size", g.grid.size}}},
            {"coefficients", coeffs},
            {"log_mu", {{"a0", g.log_mu.a0}, {"a", g.log_mu.a}, {"b", g.log_mu.b}}},
            {"meta", to_json(g.meta)},
            {"residuals", to_json(g.residuals)}};
}

GeodesicDisc geodesic_from_json(const Json& j) {
    try {
        const DomainSpec spec = domain_from_json(field(j, "domain"));
        const Json& gj = field(j, "grid");
        const FourierGrid grid{field(gj, "degree").get<int>(), field(gj, "size").get<int>()};
        const Json& cj = field(j, "coefficients");
        if (!cj.is_array() || static_cast<int>(cj.size()) != spec.dimension())
            throw std::invalid_argument("coefficients: one row per coordinate expected");
        CMat coeffs(spec.dimension(), grid.degree + 1);
        for (int c = 0; c < spec.dimension(); ++c) {
            const CVec row = cvec_from_json(cj[static_cast<std::size_t>(c)]);
            if (row.size() != grid.degree + 1) throw std::invalid_argument("coefficients: degree mismatch");
            coeffs.row(c) = row.transpose();
        }
        const Json& lj = field(j, "log_mu");
        RealTrigPoly q;
        q.a0 = field(lj, "a0").get<double>();
        q.a = numbers(field(lj, "a"), "log_mu.a");
        q.b = numbers(field(lj, "b"), "log_mu.b");
        return geodesic_from_coefficients(spec, grid, coeffs, q, parametrization_from_json(field(j, "meta")));
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed geodesic: ") + e.what());
    }
}

std::string dump(const Json& j, int indent) {
    std::string out;
    write(out, j, indent, 0);
    return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest(const Json& j) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(dump(j, -1))));
    return buf;
}

}  // namespace plurikernel
