#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "affvol/grid.hpp"
#include "affvol/model.hpp"
#include "affvol/volterra.hpp"

namespace affvol {

using complex = std::complex<double>;

// F(t, u) = f(t) + b u + (c/2) u^2 + J(u)
complex eval_F(const ModelSpec& m, complex f_value, complex u);
// Same generator on real arguments, fed with Re f.
double eval_F_bar(const ModelSpec& m, double real_f, double u);

struct RiccatiOptions {
    SolverOptions solver{};
    // Largest Re psi accepted before reporting that the solution left the left half-plane.
    double real_part_tolerance = 1e-10;
};

std::vector<complex> solve_psi(const ModelSpec& m, const TestFunction& f, SolverDiagnostics* diag = nullptr,
                               const RiccatiOptions& options = {});
std::vector<double> solve_psi_bar(const ModelSpec& m, std::span<const double> real_f, const Grid& g,
                                  SolverDiagnostics* diag = nullptr, const RiccatiOptions& options = {});

// phi(t) = int_0^t (b0 psi + a0 psi^2 / 2 + J0(psi)), trapezoid.
std::vector<complex> compute_phi(const ModelSpec& m, std::span<const complex> psi, const Grid& g);
std::vector<double> compute_phi(const ModelSpec& m, std::span<const double> psi, const Grid& g);

struct RiccatiSolution {
    Grid grid;
    std::vector<complex> psi;
    std::vector<double> psi_bar;
    std::vector<complex> phi;
    std::vector<double> phi_bar;
    std::vector<complex> generator;      // F(t_i, psi(t_i))
    std::vector<double> generator_bar;   // F_bar(t_i, psi_bar(t_i))
    SolverDiagnostics psi_diagnostics;
    SolverDiagnostics psi_bar_diagnostics;
};

RiccatiSolution solve_riccati(const ModelSpec& m, const TestFunction& f, const RiccatiOptions& options = {});

// phi(h) + int_0^h F(s, psi(s)) g0(T - s) ds for h = lag steps, trapezoid.
complex deterministic_exponent(const RiccatiSolution& sol, std::span<const double> g0, std::size_t lag);
double deterministic_exponent_bar(const RiccatiSolution& sol, std::span<const double> g0, std::size_t lag);

// V_0^T = phi(T) + int_0^T F(T - s, psi(T - s)) g0(s) ds.
complex v0(const RiccatiSolution& sol, std::span<const double> g0);
double v0_bar(const RiccatiSolution& sol, std::span<const double> g0);
complex v0(const ModelSpec& m, const TestFunction& f);

struct ClassicalOracle {
    std::vector<complex> psi;  // at grid nodes
    std::vector<complex> phi;
    complex v0;
};

// RK4 on psi' = F(psi), phi' = b0 psi + a0 psi^2/2 + J0(psi) with step grid.step()/4.
// Requires K = 1, constant f and constant g0.
ClassicalOracle classical_riccati_oracle(const ModelSpec& m, const TestFunction& f);

struct EnvelopeBounds {
    std::vector<double> upper;  // u: bounds |Im psi|
    std::vector<double> lower;  // l: bounds Re psi from below
};

EnvelopeBounds envelope_bounds(const ModelSpec& m, const TestFunction& f);

struct ComparisonReport {
    double max_gap_violation = 0.0;  // max_i (Re psi - psi_bar), clipped at 0
    std::size_t worst_node = 0;
    double generator_violation = 0.0;  // max (Re F(u) - F_bar(Re u)), clipped at 0
    double generator_relative_violation = 0.0;  // same, divided by max(1, |F_bar|)
    std::size_t generator_samples = 0;
    std::size_t violations = 0;
    bool passed = true;
};

// Checks Re psi <= psi_bar + tolerance at every node and Re F(t,u) <= F_bar(t, Re u)
// on random u in the left half-plane.
ComparisonReport comparison_check(const ModelSpec& m, const TestFunction& f, std::span<const complex> psi,
                                  std::span<const double> psi_bar, double tolerance = 1e-10,
                                  std::size_t generator_samples = 1000, std::uint64_t seed = 7);

}  // namespace affvol
