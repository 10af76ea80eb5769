#include "affvol/convolution.hpp"

#include "affvol/resolvent.hpp"

namespace affvol {

std::vector<double> convolve(std::span<const double> f, std::span<const double> g, const Grid& grid) {
    const std::size_t n = grid.steps();
    if (f.size() != n + 1 || g.size() != n + 1) throw ContractError("convolve: sample length must match grid");
    std::vector<double> out(n + 1, 0.0);
    const double dt = grid.step();
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = 0.5 * (f[0] * g[i] + f[i] * g[0]);
        for (std::size_t m = 1; m < i; ++m) acc += f[m] * g[i - m];
        out[i] = acc * dt;
    }
    return out;
}

std::vector<double> convolve(const FirstKindResolvent& l, std::span<const double> f) {
    const std::size_t n = l.grid.steps();
    if (f.size() != n + 1) throw ContractError("convolve: sample length must match grid");
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        double acc = l.atom * f[i];
        for (std::size_t j = 0; j < i; ++j) acc += l.cell_mass[j] * 0.5 * (f[i - j] + f[i - j - 1]);
        out[i] = acc;
    }
    return out;
}

std::vector<double> cumulative_trapezoid(std::span<const double> f, const Grid& grid) {
    if (f.size() != grid.size()) throw ContractError("cumulative_trapezoid: length must match grid");
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * grid.step() * (f[i - 1] + f[i]);
    return out;
}

}  // namespace affvol
