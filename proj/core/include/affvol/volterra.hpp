#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "affvol/errors.hpp"
#include "affvol/product_weights.hpp"

namespace affvol {

struct SolverOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 50;
};

struct SolverDiagnostics {
    std::size_t max_iterations = 0;
    std::size_t total_iterations = 0;
    double max_final_update = 0.0;
    bool damping_used = false;
};

namespace detail {
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }
}  // namespace detail

// Solves y(t_i) = forcing_i + (K * G(., y))(t_i) on the grid by product trapezoid:
// rectangle-rule predictor, then fixed-point correction of the implicit node term,
// switching to 0.5 damping once an update fails to contract.
template <class T, class Integrand>
std::vector<T> solve_volterra(const ProductWeights& pw, Integrand&& integrand, std::span<const T> forcing,
                              SolverDiagnostics* diagnostics = nullptr, SolverOptions options = {}) {
    const std::size_t n = pw.grid.steps();
    if (!forcing.empty() && forcing.size() != n + 1) throw ContractError("forcing length must match grid");
    auto forcing_at = [&](std::size_t i) { return forcing.empty() ? T{} : forcing[i]; };

    std::vector<T> y(n + 1);
    std::vector<T> values(n + 1);
    y[0] = forcing_at(0);
    values[0] = integrand(std::size_t{0}, y[0]);
    SolverDiagnostics diag;
    const double diagonal = pw.lower[0];

    for (std::size_t i = 1; i <= n; ++i) {
        T history = forcing_at(i) + pw.upper[i - 1] * values[0];
        T guess = forcing_at(i);
        for (std::size_t m = 1; m < i; ++m) history += pw.mid[m] * values[i - m];
        for (std::size_t j = 0; j < i; ++j) guess += pw.cell[i - 1 - j] * values[j];

        T current = guess;
        double damping = 1.0;
        double previous_update = INFINITY;
        double update = INFINITY;
        std::size_t it = 0;
        while (it < options.max_iterations) {
            ++it;
            const T mapped = history + diagonal * integrand(i, current);
            const T next = current + damping * (mapped - current);
            update = detail::magnitude(next - current);
            current = next;
            if (update <= options.tolerance * std::max(1.0, detail::magnitude(current))) break;
            if (update > previous_update && damping == 1.0) {
                damping = 0.5;
                diag.damping_used = true;
            }
            previous_update = update;
        }
        if (!(update <= options.tolerance * std::max(1.0, detail::magnitude(current)))) {
            throw SolverError("Volterra corrector did not converge", i, update);
        }
        y[i] = current;
        values[i] = integrand(i, current);
        diag.max_iterations = std::max(diag.max_iterations, it);
        diag.total_iterations += it;
        diag.max_final_update = std::max(diag.max_final_update, update);
    }
    if (diagnostics) *diagnostics = diag;
    return y;
}

}  // namespace affvol
