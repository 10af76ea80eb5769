#pragma once

#include <span>
#include <vector>

#include "affvol/errors.hpp"
#include "affvol/grid.hpp"
#include "affvol/product_weights.hpp"

namespace affvol {

struct FirstKindResolvent;

// (K * f)(t_i): f linear between nodes, K integrated exactly on each cell.
template <class T>
std::vector<T> convolve(const ProductWeights& pw, std::span<const T> samples) {
    const std::size_t n = pw.grid.steps();
    if (samples.size() != n + 1) throw ContractError("convolve: sample length must match grid");
    std::vector<T> out(n + 1, T{});
    for (std::size_t i = 1; i <= n; ++i) {
        T acc = pw.lower[0] * samples[i] + pw.upper[i - 1] * samples[0];
        for (std::size_t m = 1; m < i; ++m) acc += pw.mid[m] * samples[i - m];
        out[i] = acc;
    }
    return out;
}

// (f * g)(t_i) for two sampled functions, trapezoid rule.
std::vector<double> convolve(std::span<const double> f, std::span<const double> g, const Grid& grid);

// (L * f)(t_i) = atom f(t_i) + sum_j cell_mass_j * average of f over the mirrored cell.
std::vector<double> convolve(const FirstKindResolvent& l, std::span<const double> f);

// Trapezoid integral over [0, t_i] for every i.
std::vector<double> cumulative_trapezoid(std::span<const double> f, const Grid& grid);

}  // namespace affvol
