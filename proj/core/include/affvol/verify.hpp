#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "affvol/grid.hpp"
#include "affvol/model.hpp"
#include "affvol/simulate.hpp"

namespace affvol {

enum class ClaimStatus { pass, fail, skipped };

std::string to_string(ClaimStatus s);

struct PropertyReport {
    std::string claim;
    ClaimStatus status = ClaimStatus::skipped;
    double magnitude = 0.0;  // worst case; the claim fails iff magnitude > tolerance
    double tolerance = 0.0;
    double runtime_s = 0.0;
    std::string detail;
};

struct Tolerances {
    double resolvent_identity = 1e-3;
    double second_kind_residual = 1e-8;
    double classical_oracle = 1e-5;
    double envelope = 1e-8;
    double comparison = 1e-10;
    double pi_routes = 1e-3;
    double gap_monotone = 1e-8;
    double two_formula = 1e-2;
    double bound = 1e-8;
    double mc_slack = 0.01;
    double mc_sigmas = 3.0;

    bool operator==(const Tolerances&) const = default;
};

struct SuiteConfig {
    ModelSpec model;
    TestFunction f;
    // Test functions for the transform claim; defaults to {f}.
    std::vector<TestFunction> transform_functions{};
    McOptions mc{};
    std::size_t past_paths = 1000;
    std::size_t sweep_models = 0;   // extra random models for the comparison and envelope claims
    std::uint64_t sweep_seed = 20240601;
    std::size_t pi_samples = 5;
    Tolerances tolerances{};
    std::set<std::string> disabled{};

    const Grid& grid() const { return f.grid(); }
};

// Claim ids in execution order.
const std::vector<std::string>& claim_ids();

// Runs every enabled claim in order.  Infrastructure failures propagate as exceptions;
// property failures are reported, not thrown.
std::vector<PropertyReport> run_suite(const SuiteConfig& config);

bool all_passed(const std::vector<PropertyReport>& reports);

struct SweepCase {
    ModelSpec model;
    TestFunction f;
    double u = 0.0;
};

// Random admissible model with f = iu: kernel among fractional, exponential, gamma and
// constant; exponential or point-mass jumps; g0 = x0 + K * theta.
SweepCase random_admissible_case(std::mt19937_64& rng, const Grid& g);

struct EnvelopeCheck {
    double lower_violation = 0.0;   // max (l - Re psi)+
    double sign_violation = 0.0;    // max (Re psi)+
    double upper_violation = 0.0;   // max (|Im psi| - u)+
};

EnvelopeCheck check_envelopes(const ModelSpec& m, const TestFunction& f, std::span<const complex> psi);

}  // namespace affvol
