#include "affvol/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <boost/random/normal_distribution.hpp>

#include "affvol/errors.hpp"
#include "affvol/philox.hpp"

namespace affvol {
namespace {

// Fixed-order dot product with four partial sums.
double dot(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    for (; k < n; ++k) s0 += a[k] * b[k];
    return (s0 + s1) + (s2 + s3);
}

}  // namespace

PathSimulator::PathSimulator(const ModelSpec& model, const Grid& grid) : model_(model), grid_(grid) {
    model_.validate();
    if (!model_.jumps.is_zero() && !model_.jumps.samplable()) {
        throw CapabilityError("jump measure is quadrature-only and cannot be simulated");
    }
    if (!model_.jumps0.is_zero() && !model_.jumps0.samplable()) {
        throw CapabilityError("constant jump measure is quadrature-only and cannot be simulated");
    }
    g0_ = model_.g0.sample(model_.kernel, grid_);
    const auto w = cell_weights(model_.kernel, grid_);
    const std::size_t n = grid_.steps();
    average_.resize(n);
    reversed_.resize(n);
    for (std::size_t k = 0; k < n; ++k) average_[k] = w[k] / grid_.step();
    for (std::size_t k = 0; k < n; ++k) reversed_[k] = average_[n - 1 - k];
}

void PathSimulator::run(std::uint64_t seed, std::uint64_t path, PathBuffers& out) const {
    const std::size_t n = grid_.steps();
    const double dt = grid_.step();
    out.x.assign(n + 1, 0.0);
    out.x_raw.assign(n + 1, 0.0);
    out.dz_drift.assign(n, 0.0);
    out.dz_diff.assign(n, 0.0);
    out.dz_jump.assign(n, 0.0);
    out.dz.assign(n, 0.0);
    out.clipped = 0;

    PhiloxEngine engine(seed, path);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    const bool jumps = !model_.jumps.is_zero();
    const bool jumps0 = !model_.jumps0.is_zero();
    const double mean_jump = model_.jumps.first_moment();
    const double mean_jump0 = model_.jumps0.first_moment();

    out.x_raw[0] = g0_[0];
    out.x[0] = std::max(g0_[0], 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double xp = out.x[j];
        const double xi = normal(engine);
        double jump_sum = 0.0;
        if (jumps) jump_sum += model_.jumps.sample_jump_sum(xp * dt, engine);
        if (jumps0) jump_sum += model_.jumps0.sample_jump_sum(dt, engine);

        out.dz_drift[j] = (model_.b0 + model_.b * xp) * dt;
        out.dz_diff[j] = std::sqrt((model_.a0 + model_.c * xp) * dt) * xi;
        out.dz_jump[j] = jump_sum - (mean_jump * xp + mean_jump0) * dt;
        out.dz[j] = out.dz_drift[j] + out.dz_diff[j] + out.dz_jump[j];

        // X_{j+1} = g0 + sum_{k<=j} a_{j-k} dz_k
        const double raw = g0_[j + 1] + dot(reversed_.data() + (n - 1 - j), out.dz.data(), j + 1);
        out.x_raw[j + 1] = raw;
        out.x[j + 1] = std::max(raw, 0.0);
        if (raw < 0.0) ++out.clipped;
    }
}

double PathEnsemble::clipped_fraction() const {
    const double total = static_cast<double>(paths) * static_cast<double>(grid.steps());
    return total > 0.0 ? static_cast<double>(clipped) / total : 0.0;
}

std::vector<double> PathEnsemble::increments(std::size_t path) const {
    std::vector<double> dz(grid.steps());
    for (std::size_t j = 0; j < dz.size(); ++j) dz[j] = dz_drift(path, j) + dz_diff(path, j) + dz_jump(path, j);
    return dz;
}

std::vector<double> PathEnsemble::z(std::size_t path) const {
    const auto dz = increments(path);
    std::vector<double> out(dz.size() + 1, 0.0);
    for (std::size_t j = 0; j < dz.size(); ++j) out[j + 1] = out[j] + dz[j];
    return out;
}

PathEnsemble simulate_paths(const ModelSpec& model, const Grid& grid, std::size_t paths, std::uint64_t seed,
                            std::size_t workers) {
    const PathSimulator sim(model, grid);
    const std::size_t n = grid.steps();
    PathEnsemble e{grid,
                   paths,
                   seed,
                   Matrix(paths, n + 1),
                   Matrix(paths, n + 1),
                   Matrix(paths, n),
                   Matrix(paths, n),
                   Matrix(paths, n),
                   0};
    std::vector<std::size_t> clipped(paths, 0);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        PathBuffers buf;
        for (std::size_t p = next++; p < paths; p = next++) {
            sim.run(seed, p, buf);
            std::copy(buf.x.begin(), buf.x.end(), e.x.row(p).begin());
            std::copy(buf.x_raw.begin(), buf.x_raw.end(), e.x_raw.row(p).begin());
            std::copy(buf.dz_drift.begin(), buf.dz_drift.end(), e.dz_drift.row(p).begin());
            std::copy(buf.dz_diff.begin(), buf.dz_diff.end(), e.dz_diff.row(p).begin());
            std::copy(buf.dz_jump.begin(), buf.dz_jump.end(), e.dz_jump.row(p).begin());
            clipped[p] = buf.clipped;
        }
    };
    workers = std::max<std::size_t>(1, std::min(workers, paths));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (std::size_t c : clipped) e.clipped += c;
    return e;
}

std::vector<double> forward_mean_curve(const ModelSpec& model, const Grid& grid) {
    const auto g0 = model.g0.sample(model.kernel, grid);
    const auto rb = resolvent_second_kind(model.kernel, model.b, grid);
    const auto w = cell_weights(model.kernel, grid);
    std::vector<double> out(grid.size());
    double kernel_mass = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i > 0) kernel_mass += w[i - 1];
        double conv = 0.0;  // (R_B * g0)(t_i)
        for (std::size_t j = 0; j < i; ++j) conv += rb.cell_mass[j] * 0.5 * (g0[i - j] + g0[i - j - 1]);
        // (E_B * b0)(t_i) = b0 (int_0^t K - int_0^t R_B * K)
        out[i] = g0[i] - conv + model.b0 * (kernel_mass - rb.kernel_integrated[i]);
    }
    return out;
}

double forward_mean(const ModelSpec& model, const Grid& grid) { return forward_mean_curve(model, grid).back(); }

double adjusted_forward(const PathSimulator& sim, std::span<const double> dz, std::size_t t_index,
                        std::size_t s_index) {
    const std::size_t n = sim.grid().steps();
    if (dz.size() != n) throw ContractError("adjusted_forward: increment length must match grid");
    if (s_index > n || t_index >= s_index) throw DomainError("adjusted_forward needs t < s on the grid");
    const auto& a = sim.kernel_average();
    double acc = sim.g0()[s_index];
    for (std::size_t j = 0; j < t_index; ++j) acc += a[s_index - 1 - j] * dz[j];
    return acc;
}

}  // namespace affvol
