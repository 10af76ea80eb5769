#include "affvol/riccati.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "affvol/convolution.hpp"
#include "affvol/errors.hpp"
#include "affvol/product_weights.hpp"

namespace affvol {
namespace {

template <class T>
void check_left_half_plane(const std::vector<T>& psi, double tolerance, const char* what) {
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double re = std::real(psi[i]);
        if (re > tolerance) {
            std::ostringstream os;
            os << what << " has positive real part " << re << " at node " << i;
            throw InvariantError(os.str(), i, re);
        }
    }
}

template <class T>
std::vector<T> trapezoid_integral(const std::vector<T>& integrand, const Grid& g) {
    std::vector<T> out(integrand.size(), T{});
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = out[i - 1] + 0.5 * g.step() * (integrand[i - 1] + integrand[i]);
    return out;
}

}  // namespace

complex eval_F(const ModelSpec& m, complex f_value, complex u) {
    return f_value + m.b * u + 0.5 * m.c * u * u + m.jumps.transform(u);
}

double eval_F_bar(const ModelSpec& m, double real_f, double u) {
    return real_f + m.b * u + 0.5 * m.c * u * u + m.jumps.transform(u);
}

std::vector<complex> solve_psi(const ModelSpec& m, const TestFunction& f, SolverDiagnostics* diag,
                               const RiccatiOptions& options) {
    const Grid& g = f.grid();
    if (f.is_zero()) return std::vector<complex>(g.size());
    const ProductWeights pw(m.kernel, g);
    const auto samples = f.samples();
    auto psi = solve_volterra<complex>(
        pw, [&](std::size_t i, complex y) { return eval_F(m, samples[i], y); }, {}, diag, options.solver);
    check_left_half_plane(psi, options.real_part_tolerance, "psi");
    return psi;
}

std::vector<double> solve_psi_bar(const ModelSpec& m, std::span<const double> real_f, const Grid& g,
                                  SolverDiagnostics* diag, const RiccatiOptions& options) {
    if (real_f.size() != g.size()) throw ContractError("solve_psi_bar: Re f length must match grid");
    bool zero = true;
    for (double v : real_f) {
        if (v > 0.0) throw DomainError("solve_psi_bar: Re f must be <= 0");
        zero = zero && v == 0.0;
    }
    if (zero) return std::vector<double>(g.size(), 0.0);
    const ProductWeights pw(m.kernel, g);
    auto psi = solve_volterra<double>(
        pw, [&](std::size_t i, double y) { return eval_F_bar(m, real_f[i], y); }, {}, diag, options.solver);
    check_left_half_plane(psi, options.real_part_tolerance, "psi_bar");
    return psi;
}

std::vector<complex> compute_phi(const ModelSpec& m, std::span<const complex> psi, const Grid& g) {
    if (psi.size() != g.size()) throw ContractError("compute_phi: psi length must match grid");
    if (!m.has_constant_terms()) return std::vector<complex>(g.size());
    std::vector<complex> integrand(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        integrand[i] = m.b0 * psi[i] + 0.5 * m.a0 * psi[i] * psi[i] + m.jumps0.transform(psi[i]);
    }
    return trapezoid_integral(integrand, g);
}

std::vector<double> compute_phi(const ModelSpec& m, std::span<const double> psi, const Grid& g) {
    if (psi.size() != g.size()) throw ContractError("compute_phi: psi length must match grid");
    if (!m.has_constant_terms()) return std::vector<double>(g.size(), 0.0);
    std::vector<double> integrand(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        integrand[i] = m.b0 * psi[i] + 0.5 * m.a0 * psi[i] * psi[i] + m.jumps0.transform(psi[i]);
    }
    return trapezoid_integral(integrand, g);
}

RiccatiSolution solve_riccati(const ModelSpec& m, const TestFunction& f, const RiccatiOptions& options) {
    const Grid& g = f.grid();
    RiccatiSolution sol{g, {}, {}, {}, {}, {}, {}, {}, {}};
    const auto real_f = f.real_part();
    sol.psi_bar = solve_psi_bar(m, real_f, g, &sol.psi_bar_diagnostics, options);
    if (f.is_real()) {
        // same equation: reuse the real solution so that V and Vbar agree to the last bit
        sol.psi.assign(sol.psi_bar.begin(), sol.psi_bar.end());
        sol.psi_diagnostics = sol.psi_bar_diagnostics;
    } else {
        sol.psi = solve_psi(m, f, &sol.psi_diagnostics, options);
    }
    sol.phi = compute_phi(m, std::span<const complex>(sol.psi), g);
    sol.phi_bar = compute_phi(m, std::span<const double>(sol.psi_bar), g);
    sol.generator.resize(g.size());
    sol.generator_bar.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        sol.generator[i] = eval_F(m, f[i], sol.psi[i]);
        sol.generator_bar[i] = eval_F_bar(m, real_f[i], sol.psi_bar[i]);
    }
    if (f.is_real()) {
        sol.phi.assign(sol.phi_bar.begin(), sol.phi_bar.end());
        sol.generator.assign(sol.generator_bar.begin(), sol.generator_bar.end());
    }
    return sol;
}

complex deterministic_exponent(const RiccatiSolution& sol, std::span<const double> g0, std::size_t lag) {
    const std::size_t n = sol.grid.steps();
    if (g0.size() != n + 1) throw ContractError("deterministic_exponent: g0 length must match grid");
    if (lag > n) throw ContractError("deterministic_exponent: lag beyond the horizon");
    if (lag == 0) return sol.phi[0];
    complex acc = 0.5 * (sol.generator[0] * g0[n] + sol.generator[lag] * g0[n - lag]);
    for (std::size_t q = 1; q < lag; ++q) acc += sol.generator[q] * g0[n - q];
    return sol.phi[lag] + acc * sol.grid.step();
}

double deterministic_exponent_bar(const RiccatiSolution& sol, std::span<const double> g0, std::size_t lag) {
    const std::size_t n = sol.grid.steps();
    if (g0.size() != n + 1) throw ContractError("deterministic_exponent_bar: g0 length must match grid");
    if (lag > n) throw ContractError("deterministic_exponent_bar: lag beyond the horizon");
    if (lag == 0) return sol.phi_bar[0];
    double acc = 0.5 * (sol.generator_bar[0] * g0[n] + sol.generator_bar[lag] * g0[n - lag]);
    for (std::size_t q = 1; q < lag; ++q) acc += sol.generator_bar[q] * g0[n - q];
    return sol.phi_bar[lag] + acc * sol.grid.step();
}

complex v0(const RiccatiSolution& sol, std::span<const double> g0) {
    return deterministic_exponent(sol, g0, sol.grid.steps());
}

double v0_bar(const RiccatiSolution& sol, std::span<const double> g0) {
    return deterministic_exponent_bar(sol, g0, sol.grid.steps());
}

complex v0(const ModelSpec& m, const TestFunction& f) {
    const auto sol = solve_riccati(m, f);
    const auto g0 = m.g0.sample(m.kernel, f.grid());
    return v0(sol, g0);
}

ClassicalOracle classical_riccati_oracle(const ModelSpec& m, const TestFunction& f) {
    if (!m.kernel.is_constant() || m.kernel(1.0) != 1.0) {
        throw ContractError("classical oracle requires the constant kernel K = 1");
    }
    if (!f.is_constant()) throw ContractError("classical oracle requires a constant test function");
    if (!m.g0.is_constant()) throw ContractError("classical oracle requires a constant input curve");
    const Grid& g = f.grid();
    const complex fv = f[0];
    const double x0 = m.g0.sample(m.kernel, g)[0];

    auto rhs = [&](complex psi, complex& dpsi, complex& dphi) {
        dpsi = eval_F(m, fv, psi);
        dphi = m.b0 * psi + 0.5 * m.a0 * psi * psi + m.jumps0.transform(psi);
    };
    ClassicalOracle out;
    out.psi.assign(g.size(), 0.0);
    out.phi.assign(g.size(), 0.0);
    const double h = g.step() / 4.0;
    complex psi = 0.0, phi = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        for (int sub = 0; sub < 4; ++sub) {
            complex k1, l1, k2, l2, k3, l3, k4, l4;
            rhs(psi, k1, l1);
            rhs(psi + 0.5 * h * k1, k2, l2);
            rhs(psi + 0.5 * h * k2, k3, l3);
            rhs(psi + h * k3, k4, l4);
            psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            phi += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
        }
        out.psi[i] = psi;
        out.phi[i] = phi;
    }
    out.v0 = phi + x0 * psi;
    return out;
}

EnvelopeBounds envelope_bounds(const ModelSpec& m, const TestFunction& f) {
    const Grid& g = f.grid();
    const ProductWeights pw(m.kernel, g);
    const auto samples = f.samples();
    EnvelopeBounds out;
    out.upper = solve_volterra<double>(
        pw, [&](std::size_t i, double y) { return std::abs(samples[i].imag()) + m.b * y; }, {});
    const double quad = 0.5 * m.c + 0.5 * m.jumps.second_moment();
    out.lower = solve_volterra<double>(
        pw,
        [&](std::size_t i, double y) { return samples[i].real() + m.b * y - quad * out.upper[i] * out.upper[i]; },
        {});
    return out;
}

ComparisonReport comparison_check(const ModelSpec& m, const TestFunction& f, std::span<const complex> psi,
                                  std::span<const double> psi_bar, double tolerance,
                                  std::size_t generator_samples, std::uint64_t seed) {
    if (psi.size() != psi_bar.size() || psi.size() != f.grid().size()) {
        throw ContractError("comparison_check: psi, psi_bar and f must share the grid");
    }
    ComparisonReport r;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double gap = psi[i].real() - psi_bar[i];
        if (gap > r.max_gap_violation) {
            r.max_gap_violation = gap;
            r.worst_node = i;
        }
        if (gap > tolerance) ++r.violations;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> node(0, psi.size() - 1);
    std::exponential_distribution<double> re_dist(0.5);
    std::normal_distribution<double> im_dist(0.0, 3.0);
    for (std::size_t s = 0; s < generator_samples; ++s) {
        const complex fv = f[node(rng)];
        const complex u(-re_dist(rng), im_dist(rng));
        const double bar = eval_F_bar(m, fv.real(), u.real());
        const double excess = eval_F(m, fv, u).real() - bar;
        const double relative = excess / std::max(1.0, std::abs(bar));
        r.generator_violation = std::max(r.generator_violation, excess);
        r.generator_relative_violation = std::max(r.generator_relative_violation, relative);
        if (relative > tolerance) ++r.violations;
    }
    r.generator_samples = generator_samples;
    r.passed = r.violations == 0;
    return r;
}

}  // namespace affvol
