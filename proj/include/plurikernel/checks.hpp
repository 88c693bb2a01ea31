#pragma once

// Check suites run against a domain. Each suite draws its samples from a
// seeded generator, evaluates them (optionally on several workers) and reports
// one item per property with the measured value and its tolerance.
//
// Suites: oracle, gvp, asymptotics, extremal, ma, convexity, reproduce, projection.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plurikernel/serialize.hpp"

namespace plurikernel {

/// Tolerances and sample counts: the file named by PLURIKERNEL_DEFAULTS when set,
/// the bundled copy otherwise.
Json load_defaults();
Json bundled_defaults();

struct CheckItem {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string relation = "<=";  ///< measured <relation> tolerance
    int samples = 0;
    bool pass = false;
    std::string detail;
};

struct CheckOptions {
    Json defaults = bundled_defaults();
    std::optional<int> modes;
    std::optional<double> tol;
    std::optional<int> homotopy_steps;
    std::uint64_t seed = 1;
    int workers = 1;
    int resolution = 0;  ///< reproduce suite; 0 takes the default

    /// Solver settings for a suite: defaults, then suite overrides, then explicit flags.
    SolverConfig solver(const std::string& suite) const;
};

struct SuiteReport {
    std::string suite;
    DomainSpec domain;
    std::vector<CheckItem> items;

    bool pass() const;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite or a domain the suite cannot handle.
SuiteReport run_suite(const std::string& suite, const DomainSpec& spec, const CheckOptions& opts = {});

Json to_json(const SuiteReport& r);

}  // namespace plurikernel
