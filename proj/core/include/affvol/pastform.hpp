#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "affvol/grid.hpp"
#include "affvol/model.hpp"
#include "affvol/resolvent.hpp"
#include "affvol/riccati.hpp"
#include "affvol/simulate.hpp"

namespace affvol {

// Samples of Pi~_h(r_k), k = 0..N - lag_steps, from
//   Pi~_h(r) = -int_(0,h] psi(h - s) L(r + ds) + int_0^h F(s, psi(s)) ds.
struct PiFunction {
    double lag = 0.0;
    std::size_t lag_steps = 0;
    std::vector<complex> values;
    complex atom_coefficient;   // psi(h) L({0})
    complex identity_defect;    // Pi~_h(0) - psi(h) L({0}); zero up to quadrature

    // values[k + 1] - values[k]
    std::vector<complex> increments() const;
};

// psi and F sampled on the resolvent grid; the real system is passed as complex with zero
// imaginary part.
PiFunction compute_pi_tilde(const FirstKindResolvent& l, std::span<const complex> psi,
                            std::span<const complex> generator, std::size_t lag_steps);
PiFunction compute_pi_tilde(const FirstKindResolvent& l, std::span<const double> psi,
                            std::span<const double> generator, std::size_t lag_steps);

// Pi~_h(r) = int_0^h F(s) (K(h - s + .) * L)(r) ds: trapezoid in s, tanh-sinh for the
// inner convolution against the closed-form density.  Needs an analytic resolvent.
complex pi_tilde_double_quadrature(const Kernel& k, const FirstKindResolvent& l, std::span<const complex> generator,
                                   std::size_t lag_steps, double r);

// Largest drop of r -> (Pi~bar_h - Re Pi~_h)(r) over consecutive samples; <= 0 when nondecreasing.
double gap_monotonicity_violation(const PiFunction& pi, const PiFunction& pi_bar);

// V_t^T and Vbar_t^T written as affine functionals of the past of X.
class PastFormula {
public:
    PastFormula(const ModelSpec& model, const TestFunction& f, const RiccatiSolution& sol,
                std::vector<std::size_t> checkpoints, ResolventMethod method = ResolventMethod::discrete);

    const std::vector<std::size_t>& checkpoints() const noexcept { return checkpoints_; }
    const FirstKindResolvent& resolvent() const noexcept { return resolvent_; }
    const PiFunction& pi(std::size_t slot) const { return pi_.at(slot); }
    const PiFunction& pi_bar(std::size_t slot) const { return pi_bar_.at(slot); }

    complex evaluate(std::size_t slot, std::span<const double> x) const;
    double evaluate_bar(std::size_t slot, std::span<const double> x) const;

private:
    Grid grid_;
    std::vector<complex> f_;
    std::vector<double> g0_;
    std::vector<std::size_t> checkpoints_;
    FirstKindResolvent resolvent_;
    std::vector<complex> deterministic_;
    std::vector<double> deterministic_bar_;
    std::vector<PiFunction> pi_;
    std::vector<PiFunction> pi_bar_;
};

complex v_past(const ModelSpec& model, const TestFunction& f, const RiccatiSolution& sol,
               std::span<const double> x, std::size_t node);

struct BoundConstant {
    double c1 = 0.0;  // ||g0||_2 ||Re F - Fbar||_2
    double c2 = 0.0;  // max_t (psi_bar - Re psi)(T - t) g0(t)
    double c3 = 0.0;  // 2 max |psi_bar - Re psi| L([0, T])
    double c = 1.0;   // exp(c1 + L({0}) c2 + c3 max |g0|)
};

BoundConstant bound_constant(const RiccatiSolution& sol, std::span<const double> g0, const FirstKindResolvent& l);

struct BoundReport {
    BoundConstant constant;
    double worst_log_ratio = 0.0;  // max log(|exp V| / (C exp Vbar))
    std::size_t checks = 0;
    std::size_t violations = 0;
    bool passed = true;
};

// Pathwise |exp V_t^T| <= C exp Vbar_t^T (1 + tolerance) at every checkpoint, with the clipped
// paths of the ensemble.
BoundReport check_bound(const PathEnsemble& paths, const PastFormula& formula, const BoundConstant& constant,
                        double tolerance = 1e-8);

struct PastCheckRow {
    std::size_t path = 0;
    double t = 0.0;
    complex v;
    double v_bar = 0.0;
    double abs_exp_v = 0.0;
    double c_exp_v_bar = 0.0;
};

struct PastCheckReport {
    std::vector<std::size_t> checkpoints;
    std::vector<PastCheckRow> rows;          // path-major
    double max_two_formula_gap = 0.0;        // |v_past - v_forward| on the raw paths
    double max_identity_defect = 0.0;
    double max_gap_monotonicity_violation = 0.0;
    BoundReport bound;
};

// Evaluates both formulas on every path of the ensemble: the unclipped values for the
// two-formula comparison, the stored clipped ones for the bound.
PastCheckReport past_check(const ModelSpec& model, const TestFunction& f, const PathEnsemble& paths,
                           std::span<const double> checkpoint_fractions, double bound_tolerance = 1e-8);

}  // namespace affvol
