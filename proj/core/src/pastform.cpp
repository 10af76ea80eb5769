#include "affvol/pastform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "affvol/errors.hpp"

namespace affvol {
namespace {

complex trapezoid(std::span<const complex> v, std::size_t upto, double dt) {
    if (upto == 0) return 0.0;
    complex acc = 0.5 * (v[0] + v[upto]);
    for (std::size_t q = 1; q < upto; ++q) acc += v[q];
    return acc * dt;
}

// int_0^{t_node} f(T - s) x_s ds
complex path_integral(std::span<const complex> f, std::span<const double> x, std::size_t node) {
    const std::size_t n = f.size() - 1;
    if (node == 0) return 0.0;
    complex acc = 0.5 * (f[n] * x[0] + f[n - node] * x[node]);
    for (std::size_t k = 1; k < node; ++k) acc += f[n - k] * x[k];
    return acc;
}

double trapezoid_norm(std::span<const double> v, double dt) {
    if (v.size() < 2) return 0.0;
    double acc = 0.5 * (v.front() * v.front() + v.back() * v.back());
    for (std::size_t q = 1; q + 1 < v.size(); ++q) acc += v[q] * v[q];
    return std::sqrt(acc * dt);
}

}  // namespace

std::vector<complex> PiFunction::increments() const {
    std::vector<complex> out(values.empty() ? 0 : values.size() - 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = values[k + 1] - values[k];
    return out;
}

PiFunction compute_pi_tilde(const FirstKindResolvent& l, std::span<const complex> psi,
                            std::span<const complex> generator, std::size_t lag_steps) {
    const Grid& g = l.grid;
    const std::size_t n_steps = g.steps();
    if (psi.size() != g.size() || generator.size() != g.size()) {
        throw ContractError("compute_pi_tilde: psi and F must be sampled on the resolvent grid");
    }
    if (lag_steps == 0 || lag_steps > n_steps) throw ContractError("compute_pi_tilde: lag must lie in (0, T]");
    const std::size_t n = lag_steps;

    PiFunction out;
    out.lag = g.node(n);
    out.lag_steps = n;
    out.atom_coefficient = psi[n] * l.atom;
    const complex integral_f = trapezoid(generator, n, g.step());

    std::vector<complex> psi_avg(n);  // psi over s in cell q, i.e. between h - t_q and h - t_{q+1}
    for (std::size_t q = 0; q < n; ++q) psi_avg[q] = 0.5 * (psi[n - q] + psi[n - q - 1]);
    out.values.resize(n_steps - n + 1);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        complex acc = 0.0;
        for (std::size_t q = 0; q < n; ++q) acc += psi_avg[q] * l.cell_mass[k + q];
        out.values[k] = integral_f - acc;
    }
    out.identity_defect = out.values[0] - out.atom_coefficient;
    return out;
}

PiFunction compute_pi_tilde(const FirstKindResolvent& l, std::span<const double> psi,
                            std::span<const double> generator, std::size_t lag_steps) {
    const std::vector<complex> p(psi.begin(), psi.end());
    const std::vector<complex> f(generator.begin(), generator.end());
    return compute_pi_tilde(l, std::span<const complex>(p), std::span<const complex>(f), lag_steps);
}

complex pi_tilde_double_quadrature(const Kernel& k, const FirstKindResolvent& l, std::span<const complex> generator,
                                   std::size_t lag_steps, double r) {
    const Grid& g = l.grid;
    if (l.source != ResolventSource::analytic) {
        throw CapabilityError("double-quadrature Pi~ needs a closed-form resolvent");
    }
    if (generator.size() != g.size()) throw ContractError("pi_tilde_double_quadrature: F length must match grid");
    if (lag_steps == 0 || lag_steps > g.steps()) throw ContractError("pi_tilde_double_quadrature: lag out of range");
    if (r < 0.0) throw DomainError("pi_tilde_double_quadrature: r must be nonnegative");

    const auto* frac = std::get_if<FractionalKernel>(&k.variant());
    const bool constant = k.is_constant();
    if (!constant && !frac) throw CapabilityError("double-quadrature Pi~ needs a constant or fractional kernel");

    boost::math::quadrature::tanh_sinh<double> quad;
    // (K(u + .) * L)(r) = L({0}) K(u + r) + int_0^r K(u + r - v) l(v) dv
    auto shifted = [&](double u) -> double {
        if (constant) return l.atom * k(1.0);
        if (r == 0.0) return 0.0;
        if (u == 0.0) return 1.0;  // (K * L)(r) = 1
        auto integrand = [&](double v) { return k(u + r - v) * fractional_resolvent_density(frac->alpha, v); };
        return quad.integrate(integrand, 0.0, r, 1e-12);
    };

    const std::size_t n = lag_steps;
    const double h = g.node(n);
    complex acc = 0.5 * (generator[0] * shifted(h) + generator[n] * shifted(0.0));
    for (std::size_t q = 1; q < n; ++q) acc += generator[q] * shifted(h - g.node(q));
    return acc * g.step();
}

double gap_monotonicity_violation(const PiFunction& pi, const PiFunction& pi_bar) {
    if (pi.values.size() != pi_bar.values.size()) throw ContractError("gap check: Pi~ tables differ in length");
    double worst = 0.0;
    // r ranges over (0, T]: the first sample sits at r = 0 and is skipped
    for (std::size_t k = 1; k + 1 < pi.values.size(); ++k) {
        const double gap0 = pi_bar.values[k].real() - pi.values[k].real();
        const double gap1 = pi_bar.values[k + 1].real() - pi.values[k + 1].real();
        worst = std::max(worst, gap0 - gap1);
    }
    return worst;
}

PastFormula::PastFormula(const ModelSpec& model, const TestFunction& f, const RiccatiSolution& sol,
                         std::vector<std::size_t> checkpoints, ResolventMethod method)
    : grid_(f.grid()),
      f_(f.samples().begin(), f.samples().end()),
      g0_(model.g0.sample(model.kernel, f.grid())),
      checkpoints_(std::move(checkpoints)),
      resolvent_(resolvent_first_kind(model.kernel, f.grid(), method)) {
    require_same_grid(grid_, sol.grid, "PastFormula");
    const std::size_t n_steps = grid_.steps();
    const std::vector<complex> psi_bar(sol.psi_bar.begin(), sol.psi_bar.end());
    const std::vector<complex> generator_bar(sol.generator_bar.begin(), sol.generator_bar.end());
    for (std::size_t node : checkpoints_) {
        if (node == 0 || node >= n_steps) throw ContractError("PastFormula: checkpoints must lie in (0, T)");
        const std::size_t lag = n_steps - node;
        deterministic_.push_back(deterministic_exponent(sol, g0_, lag));
        deterministic_bar_.push_back(deterministic_exponent_bar(sol, g0_, lag));
        pi_.push_back(compute_pi_tilde(resolvent_, sol.psi, sol.generator, lag));
        pi_bar_.push_back(compute_pi_tilde(resolvent_, psi_bar, generator_bar, lag));
    }
}

complex PastFormula::evaluate(std::size_t slot, std::span<const double> x) const {
    if (x.size() != grid_.size()) throw ContractError("PastFormula: path length must match grid");
    const std::size_t i = checkpoints_.at(slot);
    const PiFunction& p = pi_[slot];
    complex acc = deterministic_[slot] + path_integral(f_, x, i) * grid_.step();
    acc += p.atom_coefficient * (x[i] - g0_[i]);
    for (std::size_t k = 0; k < i; ++k) acc += (p.values[k + 1] - p.values[k]) * (x[i - k] - g0_[i - k]);
    return acc;
}

double PastFormula::evaluate_bar(std::size_t slot, std::span<const double> x) const {
    if (x.size() != grid_.size()) throw ContractError("PastFormula: path length must match grid");
    const std::size_t i = checkpoints_.at(slot);
    const PiFunction& p = pi_bar_[slot];
    double acc = deterministic_bar_[slot] + path_integral(f_, x, i).real() * grid_.step();
    acc += p.atom_coefficient.real() * (x[i] - g0_[i]);
    for (std::size_t k = 0; k < i; ++k) {
        acc += (p.values[k + 1].real() - p.values[k].real()) * (x[i - k] - g0_[i - k]);
    }
    return acc;
}

complex v_past(const ModelSpec& model, const TestFunction& f, const RiccatiSolution& sol, std::span<const double> x,
               std::size_t node) {
    const PastFormula formula(model, f, sol, {node});
    return formula.evaluate(0, x);
}

BoundConstant bound_constant(const RiccatiSolution& sol, std::span<const double> g0, const FirstKindResolvent& l) {
    const Grid& g = sol.grid;
    const std::size_t n = g.steps();
    if (g0.size() != g.size()) throw ContractError("bound_constant: g0 length must match grid");
    require_same_grid(g, l.grid, "bound_constant");

    std::vector<double> f_gap(g.size());
    double psi_gap_max = 0.0;
    double c2 = -std::numeric_limits<double>::infinity();
    double g0_max = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        f_gap[i] = sol.generator[i].real() - sol.generator_bar[i];
        const double psi_gap = sol.psi_bar[i] - sol.psi[i].real();
        psi_gap_max = std::max(psi_gap_max, std::abs(psi_gap));
        c2 = std::max(c2, (sol.psi_bar[n - i] - sol.psi[n - i].real()) * g0[i]);
        g0_max = std::max(g0_max, std::abs(g0[i]));
    }
    BoundConstant out;
    out.c1 = trapezoid_norm(g0, g.step()) * trapezoid_norm(f_gap, g.step());
    out.c2 = c2;
    out.c3 = 2.0 * psi_gap_max * l.total_mass();
    out.c = std::exp(out.c1 + l.atom * out.c2 + out.c3 * g0_max);
    return out;
}

BoundReport check_bound(const PathEnsemble& paths, const PastFormula& formula, const BoundConstant& constant,
                        double tolerance) {
    BoundReport report;
    report.constant = constant;
    report.worst_log_ratio = -std::numeric_limits<double>::infinity();
    const double log_c = std::log(constant.c);
    const double log_slack = std::log1p(tolerance);
    for (std::size_t p = 0; p < paths.paths; ++p) {
        const auto x = paths.x.row(p);
        for (std::size_t s = 0; s < formula.checkpoints().size(); ++s) {
            const double log_ratio = formula.evaluate(s, x).real() - formula.evaluate_bar(s, x) - log_c;
            report.worst_log_ratio = std::max(report.worst_log_ratio, log_ratio);
            ++report.checks;
            if (log_ratio > log_slack) ++report.violations;
        }
    }
    if (report.checks == 0) report.worst_log_ratio = 0.0;
    report.passed = report.violations == 0;
    return report;
}

PastCheckReport past_check(const ModelSpec& model, const TestFunction& f, const PathEnsemble& paths,
                           std::span<const double> checkpoint_fractions, double bound_tolerance) {
    require_same_grid(paths.grid, f.grid(), "past_check");
    PastCheckReport report;
    report.checkpoints = checkpoint_nodes(paths.grid, checkpoint_fractions);
    const auto sol = solve_riccati(model, f);
    const PastFormula past(model, f, sol, report.checkpoints);
    const ForwardFormula forward(model, f, sol, report.checkpoints);
    const auto g0 = model.g0.sample(model.kernel, paths.grid);
    const BoundConstant constant = bound_constant(sol, g0, past.resolvent());

    for (std::size_t s = 0; s < report.checkpoints.size(); ++s) {
        report.max_identity_defect = std::max(report.max_identity_defect, std::abs(past.pi(s).identity_defect));
        report.max_gap_monotonicity_violation =
            std::max(report.max_gap_monotonicity_violation, gap_monotonicity_violation(past.pi(s), past.pi_bar(s)));
    }
    for (std::size_t p = 0; p < paths.paths; ++p) {
        const auto x = paths.x.row(p);
        const auto x_raw = paths.x_raw.row(p);
        const auto dz = paths.increments(p);
        for (std::size_t s = 0; s < report.checkpoints.size(); ++s) {
            const complex raw_past = past.evaluate(s, x_raw);
            const complex raw_forward = forward.evaluate(s, x_raw, dz);
            report.max_two_formula_gap = std::max(report.max_two_formula_gap, std::abs(raw_past - raw_forward));

            PastCheckRow row;
            row.path = p;
            row.t = paths.grid.node(report.checkpoints[s]);
            row.v = past.evaluate(s, x);
            row.v_bar = past.evaluate_bar(s, x);
            row.abs_exp_v = std::exp(row.v.real());
            row.c_exp_v_bar = constant.c * std::exp(row.v_bar);
            report.rows.push_back(row);
        }
    }
    report.bound = check_bound(paths, past, constant, bound_tolerance);
    return report;
}

}  // namespace affvol
