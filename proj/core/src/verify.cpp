#include "affvol/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "affvol/errors.hpp"
#include "affvol/pastform.hpp"
#include "affvol/resolvent.hpp"
#include "affvol/riccati.hpp"

namespace affvol {
namespace {

std::string format(const char* label, double value) {
    std::ostringstream os;
    os.precision(6);
    os << label << '=' << value;
    return os.str();
}

// Lazily shared results for claims that read the same simulation.
struct SuiteState {
    const SuiteConfig& config;
    std::optional<RiccatiSolution> solution;
    std::optional<TransformReport> transform;
    std::optional<PastCheckReport> past;

    const RiccatiSolution& sol() {
        if (!solution) solution = solve_riccati(config.model, config.f);
        return *solution;
    }
    const TransformReport& mc() {
        if (!transform) {
            McOptions opts = config.mc;
            opts.sigmas = config.tolerances.mc_sigmas;
            opts.slack = config.tolerances.mc_slack;
            const auto& fs = config.transform_functions.empty() ? std::vector<TestFunction>{config.f}
                                                                : config.transform_functions;
            transform = mc_transform(config.model, fs, opts);
        }
        return *transform;
    }
    const PastCheckReport& past_report() {
        if (!past) {
            const auto paths =
                simulate_paths(config.model, config.grid(), config.past_paths, config.mc.seed, config.mc.workers);
            past = past_check(config.model, config.f, paths, config.mc.checkpoint_fractions, config.tolerances.bound);
        }
        return *past;
    }
};

void finish(PropertyReport& r) {
    if (r.status != ClaimStatus::skipped) {
        r.status = std::isfinite(r.magnitude) && r.magnitude <= r.tolerance ? ClaimStatus::pass : ClaimStatus::fail;
    }
}

std::vector<SweepCase> sweep(const SuiteConfig& config) {
    std::vector<SweepCase> cases;
    std::mt19937_64 rng(config.sweep_seed);
    for (std::size_t k = 0; k < config.sweep_models; ++k) cases.push_back(random_admissible_case(rng, config.grid()));
    return cases;
}

void claim_resolvent_identity(SuiteState& s, PropertyReport& r) {
    const auto& cfg = s.config;
    r.tolerance = cfg.tolerances.resolvent_identity;
    const auto l = resolvent_first_kind(cfg.model.kernel, cfg.grid());
    const auto id = resolvent_identity(cfg.model.kernel, l);
    for (std::size_t i = 1; i < id.size(); ++i) r.magnitude = std::max(r.magnitude, std::abs(id[i] - 1.0));
    r.detail = "source=" + to_string(l.source);
}

void claim_second_kind(SuiteState& s, PropertyReport& r) {
    const auto& cfg = s.config;
    r.tolerance = cfg.tolerances.second_kind_residual;
    r.magnitude = resolvent_second_kind(cfg.model.kernel, cfg.model.b, cfg.grid()).residual;
}

void claim_classical_oracle(SuiteState& s, PropertyReport& r) {
    const auto& cfg = s.config;
    r.tolerance = cfg.tolerances.classical_oracle;
    if (!cfg.f.is_constant()) {
        r.status = ClaimStatus::skipped;
        r.detail = "test function is not constant";
        return;
    }
    ModelSpec reduced = cfg.model;
    reduced.kernel = Kernel::constant(1.0);
    reduced.g0 = InputCurve::constant_plus_ktheta(cfg.model.g0.sample(cfg.model.kernel, cfg.grid())[0], 0.0);
    const auto psi = solve_psi(reduced, cfg.f);
    const auto oracle = classical_riccati_oracle(reduced, cfg.f);
    for (std::size_t i = 0; i < psi.size(); ++i) r.magnitude = std::max(r.magnitude, std::abs(psi[i] - oracle.psi[i]));
    r.detail = "reduced to K=1";
}

void claim_envelopes(SuiteState& s, PropertyReport& r) {
    const auto& cfg = s.config;
    r.tolerance = cfg.tolerances.envelope;
    auto one = [&](const ModelSpec& m, const TestFunction& f, std::span<const complex> psi) {
        const auto e = check_envelopes(m, f, psi);
        r.magnitude = std::max({r.magnitude, e.lower_violation, e.sign_violation, e.upper_violation});
    };
    one(cfg.model, cfg.f, s.sol().psi);
    const auto cases = sweep(cfg);
    for (const auto& c : cases) one(c.model, c.f, solve_psi(c.model, c.f));
    r.detail = format("models", static_cast<double>(cases.size() + 1));
}

void claim_comparison(SuiteState& s, PropertyReport& r) {
    const auto& cfg = s.config;
    r.tolerance = cfg.tolerances.comparison;
    std::size_t seed = 7;
    auto one = [&](const ModelSpec& m, const TestFunction& f, const RiccatiSolution& sol) {
        const auto c = comparison_check(m, f, sol.psi, sol.psi_bar, cfg.tolerances.comparison, 1000, seed++);
        r.magnitude = std::max({r.magnitude, c.max_gap_violation, c.generator_relative_violation});
    };
    one(cfg.model, cfg.f, s.sol());
    const auto cases = sweep(cfg);
    for (const auto& c : cases) one(c.model, c.f, solve_riccati(c.model, c.f));
    r.detail = format("models", static_cast<double>(cases.size() + 1));
}

void claim_pi_routes(SuiteState& s, PropertyReport& r) {
    const auto& cfg = s.config;
    r.tolerance = cfg.tolerances.pi_routes;
    const auto l = resolvent_first_kind(cfg.model.kernel, cfg.grid());
    if (l.source != ResolventSource::analytic) {
        r.status = ClaimStatus::skipped;
        r.detail = "no closed-form resolvent for this kernel";
        return;
    }
    const auto& sol = s.sol();
    const std::size_t n = cfg.grid().steps();
    std::mt19937_64 rng(cfg.sweep_seed);
    std::uniform_int_distribution<std::size_t> lag_dist(1, n - 1);
    for (std::size_t k = 0; k < cfg.pi_samples; ++k) {
        const std::size_t lag = lag_dist(rng);
        std::uniform_int_distribution<std::size_t> r_dist(1, n - lag);
        const std::size_t node = r_dist(rng);
        const auto pi = compute_pi_tilde(l, sol.psi, sol.generator, lag);
        const complex direct = pi_tilde_double_quadrature(cfg.model.kernel, l, sol.generator, lag, cfg.grid().node(node));
        r.magnitude = std::max(r.magnitude, std::abs(pi.values[node] - direct));
    }
    r.detail = format("samples", static_cast<double>(cfg.pi_samples));
}

void claim_gap_monotone(SuiteState& s, PropertyReport& r) {
    const auto& cfg = s.config;
    r.tolerance = cfg.tolerances.gap_monotone;
    const PastFormula past(cfg.model, cfg.f, s.sol(), checkpoint_nodes(cfg.grid(), cfg.mc.checkpoint_fractions));
    for (std::size_t k = 0; k < past.checkpoints().size(); ++k) {
        r.magnitude = std::max(r.magnitude, gap_monotonicity_violation(past.pi(k), past.pi_bar(k)));
    }
}

void claim_two_formula(SuiteState& s, PropertyReport& r) {
    r.tolerance = s.config.tolerances.two_formula;
    const auto& p = s.past_report();
    r.magnitude = p.max_two_formula_gap;
    r.detail = format("paths", static_cast<double>(s.config.past_paths)) + ' ' +
               format("identity_defect", p.max_identity_defect);
}

void claim_forward_mean(SuiteState& s, PropertyReport& r) {
    const auto& mc = s.mc();
    const auto& last = mc.forward_mean.back();
    r.tolerance = s.config.tolerances.mc_slack;
    r.magnitude = mc.terminal_mean_gap - s.config.tolerances.mc_sigmas * last.mc_std_error;
    r.detail = format("gap", mc.terminal_mean_gap) + ' ' + format("stderr", last.mc_std_error) + ' ' +
               format("clipped_fraction", mc.clipped_fraction);
}

void claim_flatness(SuiteState& s, PropertyReport& r) {
    const auto& mc = s.mc();
    r.tolerance = s.config.tolerances.mc_slack;
    r.magnitude = -std::numeric_limits<double>::infinity();
    for (const auto& c : mc.cases) {
        for (const auto* series : {&c.flatness, &c.flatness_bar}) {
            for (const auto& p : *series) {
                r.magnitude = std::max(r.magnitude, p.gap - s.config.tolerances.mc_sigmas * p.std_error);
            }
        }
    }
    r.detail = "excess over the statistical band";
}

void claim_bound(SuiteState& s, PropertyReport& r) {
    r.tolerance = s.config.tolerances.bound;
    if (s.config.model.has_constant_terms()) {
        r.status = ClaimStatus::skipped;
        r.detail = "bound constant does not cover constant drift, diffusion or jump terms";
        return;
    }
    const auto& b = s.past_report().bound;
    r.magnitude = std::expm1(b.worst_log_ratio);
    r.detail = format("C", b.constant.c) + ' ' + format("checks", static_cast<double>(b.checks));
}

void claim_transform(SuiteState& s, PropertyReport& r) {
    const auto& mc = s.mc();
    r.tolerance = s.config.tolerances.mc_slack;
    r.magnitude = -std::numeric_limits<double>::infinity();
    for (const auto& c : mc.cases) {
        r.magnitude = std::max(r.magnitude, c.gap - s.config.tolerances.mc_sigmas * c.std_error);
    }
    r.detail = format("cases", static_cast<double>(mc.cases.size())) + ' ' +
               format("jump_compensation_z", mc.jump_compensation_z);
}

struct Claim {
    const char* id;
    void (*run)(SuiteState&, PropertyReport&);
};

constexpr Claim kClaims[] = {
    {"kernel.resolvent_identity", claim_resolvent_identity},
    {"kernel.second_kind_residual", claim_second_kind},
    {"riccati.classical_oracle", claim_classical_oracle},
    {"riccati.envelopes", claim_envelopes},
    {"riccati.comparison", claim_comparison},
    {"pastform.pi_tilde_routes", claim_pi_routes},
    {"pastform.gap_monotone", claim_gap_monotone},
    {"pastform.two_formula", claim_two_formula},
    {"simulate.forward_mean", claim_forward_mean},
    {"simulate.flatness", claim_flatness},
    {"pastform.bound", claim_bound},
    {"simulate.transform", claim_transform},
};

}  // namespace

std::string to_string(ClaimStatus s) {
    switch (s) {
        case ClaimStatus::pass: return "pass";
        case ClaimStatus::fail: return "fail";
        case ClaimStatus::skipped: return "skipped";
    }
    return "unknown";
}

const std::vector<std::string>& claim_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& c : kClaims) out.emplace_back(c.id);
        return out;
    }();
    return ids;
}

std::vector<PropertyReport> run_suite(const SuiteConfig& config) {
    config.model.validate();
    for (const auto& id : config.disabled) {
        if (std::find(claim_ids().begin(), claim_ids().end(), id) == claim_ids().end()) {
            throw ConfigError("unknown claim id: " + id);
        }
    }
    SuiteState state{config, {}, {}, {}};
    std::vector<PropertyReport> out;
    for (const auto& c : kClaims) {
        if (config.disabled.count(c.id)) continue;
        PropertyReport r;
        r.claim = c.id;
        r.status = ClaimStatus::pass;
        const auto start = std::chrono::steady_clock::now();
        c.run(state, r);
        r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        finish(r);
        out.push_back(std::move(r));
    }
    return out;
}

bool all_passed(const std::vector<PropertyReport>& reports) {
    return std::none_of(reports.begin(), reports.end(), [](const auto& r) { return r.status == ClaimStatus::fail; });
}

SweepCase random_admissible_case(std::mt19937_64& rng, const Grid& g) {
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    const int kernel_kind = std::uniform_int_distribution<int>(0, 3)(rng);
    Kernel kernel = Kernel::constant(1.0);
    switch (kernel_kind) {
        case 0: kernel = Kernel::fractional(uniform(0.55, 1.0)); break;
        case 1: kernel = Kernel::exponential(uniform(0.5, 2.0), uniform(0.5, 3.0)); break;
        case 2: kernel = Kernel::gamma(uniform(0.55, 1.0), uniform(0.5, 3.0)); break;
        default: kernel = Kernel::constant(uniform(0.5, 2.0)); break;
    }
    const double b = uniform(-1.0, 0.5);
    const double c = uniform(0.0, 0.5);
    const LevyMeasure jumps = std::bernoulli_distribution(0.5)(rng)
                                  ? LevyMeasure::exponential(uniform(0.0, 2.0), uniform(2.0, 20.0))
                                  : LevyMeasure::point_mass(uniform(0.0, 2.0), uniform(0.05, 0.5));
    const double x0 = uniform(0.05, 0.5);
    const double theta = uniform(0.0, 0.2);
    const double u = uniform(0.25, 4.0);
    ModelSpec m{kernel, b, c, jumps, InputCurve::constant_plus_ktheta(x0, theta)};
    return {std::move(m), TestFunction::imag_const(u, g), u};
}

EnvelopeCheck check_envelopes(const ModelSpec& m, const TestFunction& f, std::span<const complex> psi) {
    const auto env = envelope_bounds(m, f);
    EnvelopeCheck out;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        out.lower_violation = std::max(out.lower_violation, env.lower[i] - psi[i].real());
        out.sign_violation = std::max(out.sign_violation, psi[i].real());
        out.upper_violation = std::max(out.upper_violation, std::abs(psi[i].imag()) - env.upper[i]);
    }
    return out;
}

}  // namespace affvol
