#pragma once

// JSON form of domains, solver settings and geodesics. Complex numbers are
// [re, im] pairs; doubles are written with 17 significant digits so equal
// values always give equal bytes.

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "plurikernel/geodesic.hpp"

namespace plurikernel {

using Json = nlohmann::ordered_json;

std::string library_version();

Json to_json(cplx c);
Json to_json(const CVec& v);
cplx complex_from_json(const Json& j);
CVec cvec_from_json(const Json& j);

/// {"kind":"ball","n":2}, {"kind":"ellipsoid","a":[1,4]}, optionally with
/// "eps" and "bump":[{"coef":c,"powers":[...]}] for a perturbed ellipsoid.
Json to_json(const DomainSpec& spec);
DomainSpec domain_from_json(const Json& j);
DomainSpec load_domain(const std::string& path);

Json to_json(const SolverConfig& cfg);
Json to_json(const ResidualReport& r);
Json to_json(const Parametrization& meta);
Parametrization parametrization_from_json(const Json& j);

Json to_json(const GeodesicDisc& g);
/// Rebuilds the disc from coefficients and log mu; duals and residuals are recomputed.
GeodesicDisc geodesic_from_json(const Json& j);

/// Deterministic text: fixed key order, %.17g doubles, non-finite values as null.
std::string dump(const Json& j, int indent = 2);

std::uint64_t fnv1a(std::string_view bytes);
/// 16 hex digits of the FNV-1a hash of the compact dump.
std::string digest(const Json& j);

}  // namespace plurikernel
