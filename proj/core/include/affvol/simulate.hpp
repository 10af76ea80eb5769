#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "affvol/grid.hpp"
#include "affvol/model.hpp"
#include "affvol/product_weights.hpp"
#include "affvol/resolvent.hpp"
#include "affvol/riccati.hpp"

namespace affvol {

// Row-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// One simulated trajectory.  dz_jump is compensated: the raw jump sum minus
// (nu0 + x nu)(xi) dt, so that dz = dz_drift + dz_diff + dz_jump.
struct PathBuffers {
    std::vector<double> x;       // clipped at 0, N + 1 nodes
    std::vector<double> x_raw;   // before clipping
    std::vector<double> dz_drift;
    std::vector<double> dz_diff;
    std::vector<double> dz_jump;
    std::vector<double> dz;
    std::size_t clipped = 0;
};

// Explicit scheme on the grid.  Per step the path stream is consumed as: one standard
// normal, then the Poisson count and sizes for x nu, then those for nu0.
class PathSimulator {
public:
    PathSimulator(const ModelSpec& model, const Grid& grid);

    void run(std::uint64_t seed, std::uint64_t path, PathBuffers& out) const;

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<double>& g0() const noexcept { return g0_; }
    // a_n = (1/step) int_{t_n}^{t_{n+1}} K
    const std::vector<double>& kernel_average() const noexcept { return average_; }

private:
    ModelSpec model_;
    Grid grid_;
    std::vector<double> g0_;
    std::vector<double> average_;
    std::vector<double> reversed_;
};

struct PathEnsemble {
    Grid grid;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    Matrix x;
    Matrix x_raw;
    Matrix dz_drift;
    Matrix dz_diff;
    Matrix dz_jump;
    std::size_t clipped = 0;

    double clipped_fraction() const;
    std::vector<double> increments(std::size_t path) const;
    // Z(t_i) by prefix sums, i = 0..N
    std::vector<double> z(std::size_t path) const;
};

PathEnsemble simulate_paths(const ModelSpec& model, const Grid& grid, std::size_t paths, std::uint64_t seed,
                            std::size_t workers = 1);

// E[X_t] = (g0 - R_B * g0 + E_B * b0)(t) at every node.
std::vector<double> forward_mean_curve(const ModelSpec& model, const Grid& grid);
double forward_mean(const ModelSpec& model, const Grid& grid);

// g_t(s) = g0(s) + sum_{t_j < t} a_{s-index - 1 - j} dz_j for node indices t < s.
double adjusted_forward(const PathSimulator& sim, std::span<const double> dz, std::size_t t_index,
                        std::size_t s_index);

// Forward-form exponent V_t^T evaluated at fixed checkpoint nodes.
class ForwardFormula {
public:
    ForwardFormula(const ModelSpec& model, const TestFunction& f, const RiccatiSolution& sol,
                   std::vector<std::size_t> checkpoints);

    const std::vector<std::size_t>& checkpoints() const noexcept { return checkpoints_; }
    // x: path values used in int_0^t f(T - s) X_s ds; dz: increments of Z.
    complex evaluate(std::size_t slot, std::span<const double> x, std::span<const double> dz) const;
    double evaluate_bar(std::size_t slot, std::span<const double> x, std::span<const double> dz) const;
    // int_0^{t_i} f(T - s) X_s ds and its real-part counterpart
    complex path_integral(std::size_t node, std::span<const double> x) const;

private:
    struct Slot {
        std::size_t node;
        complex deterministic;   // phi(h) + int_0^h F(s) g0(T - s) ds
        double deterministic_bar;
        std::vector<complex> weights;   // G(l), l = 0..node-1
        std::vector<double> weights_bar;
    };
    Grid grid_;
    std::vector<complex> f_;
    std::vector<std::size_t> checkpoints_;
    std::vector<Slot> slots_;
};

complex v_forward(const ModelSpec& model, const TestFunction& f, const RiccatiSolution& sol,
                  std::span<const double> x, std::span<const double> dz, std::size_t node);

struct McOptions {
    std::size_t paths = 10000;
    std::uint64_t seed = 1;
    std::vector<double> checkpoint_fractions{0.25, 0.5, 0.75};
    std::size_t workers = 1;
    double sigmas = 3.0;
    double slack = 0.01;
};

struct FlatnessPoint {
    double t = 0.0;
    complex mean;
    double std_error = 0.0;
    complex reference;
    double gap = 0.0;
    double tolerance = 0.0;
    bool passed = true;
};

struct TransformCase {
    complex theory;          // exp(V_0^T)
    complex estimate;        // mean of exp(int_0^T f(T - s) X_s ds)
    double std_error = 0.0;
    double gap = 0.0;
    double tolerance = 0.0;
    bool passed = true;
    double theory_bar = 0.0;  // exp(Vbar_0^T)
    std::vector<FlatnessPoint> flatness;
    std::vector<FlatnessPoint> flatness_bar;
};

struct ForwardMeanPoint {
    double t = 0.0;
    double mc_mean = 0.0;
    double mc_std_error = 0.0;
    double formula = 0.0;
};

struct TransformReport {
    Grid grid;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::vector<TransformCase> cases;
    std::vector<ForwardMeanPoint> forward_mean;
    double terminal_mean_gap = 0.0;
    double terminal_mean_tolerance = 0.0;
    bool terminal_mean_passed = true;
    double clipped_fraction = 0.0;
    double jump_compensation_z = 0.0;  // |mean of summed dz_jump| in standard errors
    bool passed() const;
};

// Streams paths in fixed blocks; results do not depend on the worker count.
TransformReport mc_transform(const ModelSpec& model, const std::vector<TestFunction>& fs, const McOptions& options);
TransformReport mc_transform(const ModelSpec& model, const TestFunction& f, const McOptions& options);

// Node indices nearest to the given fractions of the horizon, restricted to (0, N).
std::vector<std::size_t> checkpoint_nodes(const Grid& g, std::span<const double> fractions);

}  // namespace affvol
