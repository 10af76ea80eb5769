#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "affvol/errors.hpp"
#include "affvol/simulate.hpp"

namespace affvol {
namespace {

constexpr std::size_t kBlockPaths = 256;

struct Moments {
    complex sum = 0.0;
    double sq = 0.0;

    void add(complex z) {
        sum += z;
        sq += std::norm(z);
    }
    void merge(const Moments& o) {
        sum += o.sum;
        sq += o.sq;
    }
};

struct Estimate {
    complex mean;
    double std_error;
};

Estimate finish(const Moments& m, std::size_t count) {
    const double n = static_cast<double>(count);
    const complex mean = m.sum / n;
    double var = count > 1 ? (m.sq - n * std::norm(mean)) / (n - 1.0) : 0.0;
    var = std::max(var, 0.0);
    return {mean, std::sqrt(var / n)};
}

struct BlockAccumulator {
    std::vector<Moments> terminal;
    std::vector<Moments> flat;
    std::vector<Moments> flat_bar;
    std::vector<double> x_sum;
    std::vector<double> x_sq;
    Moments jump;
    std::size_t clipped = 0;

    BlockAccumulator(std::size_t cases, std::size_t checkpoints, std::size_t nodes)
        : terminal(cases), flat(cases * checkpoints), flat_bar(cases * checkpoints), x_sum(nodes), x_sq(nodes) {}

    void merge(const BlockAccumulator& o) {
        for (std::size_t k = 0; k < terminal.size(); ++k) terminal[k].merge(o.terminal[k]);
        for (std::size_t k = 0; k < flat.size(); ++k) flat[k].merge(o.flat[k]);
        for (std::size_t k = 0; k < flat_bar.size(); ++k) flat_bar[k].merge(o.flat_bar[k]);
        for (std::size_t k = 0; k < x_sum.size(); ++k) {
            x_sum[k] += o.x_sum[k];
            x_sq[k] += o.x_sq[k];
        }
        jump.merge(o.jump);
        clipped += o.clipped;
    }
};

}  // namespace

std::vector<std::size_t> checkpoint_nodes(const Grid& g, std::span<const double> fractions) {
    std::vector<std::size_t> out;
    for (double frac : fractions) {
        if (!(frac > 0.0 && frac < 1.0)) throw ContractError("checkpoints must lie strictly inside (0, T)");
        const std::size_t i = g.nearest(frac * g.horizon());
        if (i == 0 || i == g.steps()) throw ContractError("checkpoint rounds to an end of the grid");
        out.push_back(i);
    }
    return out;
}

ForwardFormula::ForwardFormula(const ModelSpec& model, const TestFunction& f, const RiccatiSolution& sol,
                               std::vector<std::size_t> checkpoints)
    : grid_(f.grid()), f_(f.samples().begin(), f.samples().end()), checkpoints_(std::move(checkpoints)) {
    require_same_grid(grid_, sol.grid, "ForwardFormula");
    const std::size_t n_steps = grid_.steps();
    const auto g0 = model.g0.sample(model.kernel, grid_);
    const ProductWeights pw(model.kernel, grid_);
    for (std::size_t node : checkpoints_) {
        if (node > n_steps) throw ContractError("ForwardFormula: checkpoint beyond the horizon");
        const std::size_t lag = n_steps - node;
        Slot slot{node, deterministic_exponent(sol, g0, lag), deterministic_exponent_bar(sol, g0, lag),
                  std::vector<complex>(node), std::vector<double>(node)};
        // G(l) = sum_q Favg_q * hat-weighted kernel mass centred at (lag + l - q) steps
        for (std::size_t l = 0; l < node; ++l) {
            complex acc = 0.0;
            double acc_bar = 0.0;
            for (std::size_t q = 0; q < lag; ++q) {
                const double weight = pw.mid[lag + l - q];
                acc += 0.5 * (sol.generator[q] + sol.generator[q + 1]) * weight;
                acc_bar += 0.5 * (sol.generator_bar[q] + sol.generator_bar[q + 1]) * weight;
            }
            slot.weights[l] = acc;
            slot.weights_bar[l] = acc_bar;
        }
        slots_.push_back(std::move(slot));
    }
}

complex ForwardFormula::path_integral(std::size_t node, std::span<const double> x) const {
    const std::size_t n_steps = grid_.steps();
    if (node == 0) return 0.0;
    complex acc = 0.5 * (f_[n_steps] * x[0] + f_[n_steps - node] * x[node]);
    for (std::size_t k = 1; k < node; ++k) acc += f_[n_steps - k] * x[k];
    return acc * grid_.step();
}

complex ForwardFormula::evaluate(std::size_t slot, std::span<const double> x, std::span<const double> dz) const {
    const Slot& s = slots_.at(slot);
    if (x.size() != grid_.size() || dz.size() != grid_.steps()) throw ContractError("ForwardFormula: path length");
    complex acc = s.deterministic + path_integral(s.node, x);
    for (std::size_t j = 0; j < s.node; ++j) acc += dz[j] * s.weights[s.node - 1 - j];
    return acc;
}

double ForwardFormula::evaluate_bar(std::size_t slot, std::span<const double> x, std::span<const double> dz) const {
    const Slot& s = slots_.at(slot);
    if (x.size() != grid_.size() || dz.size() != grid_.steps()) throw ContractError("ForwardFormula: path length");
    // X is real, so the real part of the path integral is int Re f X
    double acc = s.deterministic_bar + path_integral(s.node, x).real();
    for (std::size_t j = 0; j < s.node; ++j) acc += dz[j] * s.weights_bar[s.node - 1 - j];
    return acc;
}

complex v_forward(const ModelSpec& model, const TestFunction& f, const RiccatiSolution& sol,
                  std::span<const double> x, std::span<const double> dz, std::size_t node) {
    const ForwardFormula formula(model, f, sol, {node});
    return formula.evaluate(0, x, dz);
}

bool TransformReport::passed() const {
    if (!terminal_mean_passed) return false;
    for (const auto& c : cases) {
        if (!c.passed) return false;
    }
    return true;
}

TransformReport mc_transform(const ModelSpec& model, const TestFunction& f, const McOptions& options) {
    return mc_transform(model, std::vector<TestFunction>{f}, options);
}

TransformReport mc_transform(const ModelSpec& model, const std::vector<TestFunction>& fs, const McOptions& options) {
    if (fs.empty()) throw ContractError("mc_transform needs at least one test function");
    if (options.paths < 2) throw ContractError("mc_transform needs at least two paths");
    const Grid grid = fs.front().grid();
    for (const auto& f : fs) require_same_grid(grid, f.grid(), "mc_transform");
    const std::size_t n_steps = grid.steps();
    const auto nodes = checkpoint_nodes(grid, options.checkpoint_fractions);
    const std::size_t n_cp = nodes.size();

    const PathSimulator sim(model, grid);
    std::vector<RiccatiSolution> sols;
    std::vector<ForwardFormula> formulas;
    TransformReport report{grid, options.paths, options.seed, {}, {}, 0.0, 0.0, true, 0.0, 0.0};
    for (const auto& f : fs) {
        sols.push_back(solve_riccati(model, f));
        formulas.emplace_back(model, f, sols.back(), nodes);
        TransformCase c;
        c.theory = std::exp(v0(sols.back(), sim.g0()));
        c.theory_bar = std::exp(v0_bar(sols.back(), sim.g0()));
        report.cases.push_back(c);
    }

    const std::size_t n_blocks = (options.paths + kBlockPaths - 1) / kBlockPaths;
    std::vector<BlockAccumulator> blocks(n_blocks, BlockAccumulator(fs.size(), n_cp, n_steps + 1));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        PathBuffers buf;
        for (std::size_t b = next++; b < n_blocks; b = next++) {
            BlockAccumulator& acc = blocks[b];
            const std::size_t lo = b * kBlockPaths;
            const std::size_t hi = std::min(options.paths, lo + kBlockPaths);
            for (std::size_t p = lo; p < hi; ++p) {
                sim.run(options.seed, p, buf);
                for (std::size_t k = 0; k < fs.size(); ++k) {
                    acc.terminal[k].add(std::exp(formulas[k].path_integral(n_steps, buf.x)));
                    for (std::size_t s = 0; s < n_cp; ++s) {
                        acc.flat[k * n_cp + s].add(std::exp(formulas[k].evaluate(s, buf.x, buf.dz)));
                        acc.flat_bar[k * n_cp + s].add(std::exp(formulas[k].evaluate_bar(s, buf.x, buf.dz)));
                    }
                }
                for (std::size_t i = 0; i <= n_steps; ++i) {
                    acc.x_sum[i] += buf.x[i];
                    acc.x_sq[i] += buf.x[i] * buf.x[i];
                }
                double jump_total = 0.0;
                for (double v : buf.dz_jump) jump_total += v;
                acc.jump.add(jump_total);
                acc.clipped += buf.clipped;
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, n_blocks));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    // pairwise tree over block index
    for (std::size_t stride = 1; stride < n_blocks; stride *= 2) {
        for (std::size_t b = 0; b + stride < n_blocks; b += 2 * stride) blocks[b].merge(blocks[b + stride]);
    }
    const BlockAccumulator& total = blocks.front();
    const std::size_t m = options.paths;

    for (std::size_t k = 0; k < fs.size(); ++k) {
        TransformCase& c = report.cases[k];
        const auto est = finish(total.terminal[k], m);
        c.estimate = est.mean;
        c.std_error = est.std_error;
        c.gap = std::abs(c.estimate - c.theory);
        c.tolerance = options.sigmas * c.std_error + options.slack;
        c.passed = c.gap <= c.tolerance;
        for (std::size_t s = 0; s < n_cp; ++s) {
            for (int bar = 0; bar < 2; ++bar) {
                const auto e = finish(bar ? total.flat_bar[k * n_cp + s] : total.flat[k * n_cp + s], m);
                FlatnessPoint fp;
                fp.t = grid.node(nodes[s]);
                fp.mean = e.mean;
                fp.std_error = e.std_error;
                fp.reference = bar ? complex(c.theory_bar) : c.theory;
                fp.gap = std::abs(fp.mean - fp.reference);
                fp.tolerance = options.sigmas * fp.std_error + options.slack;
                fp.passed = fp.gap <= fp.tolerance;
                c.passed = c.passed && fp.passed;
                (bar ? c.flatness_bar : c.flatness).push_back(fp);
            }
        }
    }

    const auto formula = forward_mean_curve(model, grid);
    const double md = static_cast<double>(m);
    for (std::size_t i = 0; i <= n_steps; ++i) {
        const double mean = total.x_sum[i] / md;
        const double var = std::max(0.0, (total.x_sq[i] - md * mean * mean) / (md - 1.0));
        report.forward_mean.push_back({grid.node(i), mean, std::sqrt(var / md), formula[i]});
    }
    const auto& last = report.forward_mean.back();
    report.terminal_mean_gap = std::abs(last.mc_mean - last.formula);
    report.terminal_mean_tolerance = options.sigmas * last.mc_std_error + options.slack;
    report.terminal_mean_passed = report.terminal_mean_gap <= report.terminal_mean_tolerance;
    report.clipped_fraction = static_cast<double>(total.clipped) / (md * static_cast<double>(n_steps));
    const auto jump = finish(total.jump, m);
    report.jump_compensation_z = jump.std_error > 0.0 ? std::abs(jump.mean) / jump.std_error : 0.0;
    return report;
}

}  // namespace affvol
