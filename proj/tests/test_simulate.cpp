#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "affvol/resolvent.hpp"
#include "affvol/riccati.hpp"
#include "affvol/simulate.hpp"
#include "common.hpp"

using namespace affvol;
using affvol::testing::acceptance_model;
using affvol::testing::classical_model;

TEST_SUITE("simulate") {
TEST_CASE("degenerate model stays at x0") {
    const Grid g(1.0, 50);
    const auto m = classical_model(0.0, 0.0, LevyMeasure::none());
    const auto paths = simulate_paths(m, g, 8, 1);
    for (double x : paths.x.data()) CHECK(x == 0.3);
    for (std::size_t p = 0; p < 8; ++p) {
        for (double dz : paths.increments(p)) CHECK(dz == 0.0);
    }
    CHECK(paths.clipped == 0);
}

TEST_CASE("deterministic Euler decay") {
    const Grid g(1.0, 1000);
    const auto paths = simulate_paths(classical_model(-0.3, 0.0, LevyMeasure::none()), g, 1, 1);
    CHECK(std::abs(paths.x(0, g.steps()) - 0.3 * std::exp(-0.3)) <= 1e-3);
}

TEST_CASE("ensemble invariants") {
    const Grid g(1.0, 100);
    const auto m = acceptance_model();
    const auto one = simulate_paths(m, g, 64, 5, 1);
    const auto four = simulate_paths(m, g, 64, 5, 4);
    CHECK(one.x.data() == four.x.data());
    CHECK(one.x_raw.data() == four.x_raw.data());
    CHECK(one.dz_jump.data() == four.dz_jump.data());
    for (double x : one.x.data()) CHECK(x >= 0.0);
    for (std::size_t i = 0; i < one.x.data().size(); ++i) {
        CHECK(one.x.data()[i] == std::max(0.0, one.x_raw.data()[i]));
    }

    // X is rebuilt from the increments: x_raw(t_i) = g0(t_i) + sum_j a_{i-1-j} dz_j.
    const PathSimulator sim(m, g);
    for (std::size_t p = 0; p < 4; ++p) {
        const auto dz = one.increments(p);
        const auto z = one.z(p);
        CHECK(z.front() == 0.0);
        for (std::size_t i : {std::size_t{1}, std::size_t{37}, g.steps()}) {
            double x = sim.g0()[i];
            for (std::size_t j = 0; j < i; ++j) x += sim.kernel_average()[i - 1 - j] * dz[j];
            CHECK(one.x_raw(p, i) == doctest::Approx(x).epsilon(1e-12));
        }
    }
}

TEST_CASE("adjusted forward") {
    const Grid g(1.0, 100);
    const auto m = acceptance_model();
    const PathSimulator sim(m, g);
    const auto paths = simulate_paths(m, g, 1, 9);
    const auto dz = paths.increments(0);
    CHECK(adjusted_forward(sim, dz, 0, 60) == sim.g0()[60]);

    const auto flat = classical_model(-0.3, 0.09, LevyMeasure::exponential(0.5, 10.0));
    const PathSimulator flat_sim(flat, g);
    const auto flat_paths = simulate_paths(flat, g, 1, 9);
    const auto flat_dz = flat_paths.increments(0);
    const auto z = flat_paths.z(0);
    for (std::size_t s : {std::size_t{40}, std::size_t{80}, std::size_t{100}}) {
        CHECK(adjusted_forward(flat_sim, flat_dz, 30, s) == doctest::Approx(0.3 + z[30]).epsilon(1e-12));
    }
}

TEST_CASE("forward mean curve") {
    const Grid g(1.0, 300);
    auto m = acceptance_model();
    m.b = 0.0;
    const auto no_drift = forward_mean_curve(m, g);
    const auto g0 = m.g0.sample(m.kernel, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(no_drift[i] == doctest::Approx(g0[i]).epsilon(1e-14));

    const auto classical = classical_model(-0.3, 0.09, LevyMeasure::exponential(0.5, 10.0));
    CHECK(std::abs(forward_mean(classical, g) - 0.3 * std::exp(-0.3)) <= 1e-6);
}

TEST_CASE("forward exponent at time zero") {
    const Grid g(1.0, 200);
    const auto m = acceptance_model();
    const auto f = TestFunction::imag_const(1.0, g);
    const auto sol = solve_riccati(m, f);
    const auto paths = simulate_paths(m, g, 1, 4);
    const std::vector<double> x(paths.x.row(0).begin(), paths.x.row(0).end());
    const auto dz = paths.increments(0);
    CHECK(std::abs(v_forward(m, f, sol, x, dz, 0) - v0(sol, m.g0.sample(m.kernel, g))) <= 1e-10);

    const auto zero = TestFunction::zero(g);
    const auto zero_sol = solve_riccati(m, zero);
    CHECK(v_forward(m, zero, zero_sol, x, dz, 100) == complex(0.0, 0.0));
}

TEST_CASE("checkpoint nodes") {
    const Grid g(1.0, 300);
    const std::vector<double> fractions{0.25, 0.5, 0.75};
    CHECK(checkpoint_nodes(g, fractions) == std::vector<std::size_t>{75, 150, 225});
    const std::vector<double> bad{1.0};
    CHECK_THROWS(checkpoint_nodes(g, bad));
}
}

TEST_SUITE("transform") {
TEST_CASE("zero test function") {
    const Grid g(1.0, 50);
    McOptions opt;
    opt.paths = 500;
    const auto report = mc_transform(acceptance_model(), TestFunction::zero(g), opt);
    CHECK(report.cases[0].estimate == complex(1.0, 0.0));
    CHECK(report.cases[0].theory == complex(1.0, 0.0));
    CHECK(report.cases[0].std_error == 0.0);
}

TEST_CASE("deterministic path") {
    const Grid g(1.0, 1000);
    const auto m = classical_model(-0.3, 0.0, LevyMeasure::none());
    McOptions opt;
    opt.paths = 300;
    const auto report = mc_transform(m, TestFunction::imag_const(2.0, g), opt);
    const auto& c = report.cases[0];
    CHECK(c.std_error == 0.0);
    CHECK(std::abs(c.estimate - c.theory) <= 1e-3);
    CHECK(std::abs(c.theory) <= 1.0 + 1e-15);
}

TEST_CASE("worker count does not change the estimate") {
    const Grid g(1.0, 60);
    McOptions opt;
    opt.paths = 1000;
    opt.seed = 3;
    opt.workers = 1;
    const auto a = mc_transform(acceptance_model(), TestFunction::imag_const(1.0, g), opt);
    opt.workers = 3;
    const auto b = mc_transform(acceptance_model(), TestFunction::imag_const(1.0, g), opt);
    CHECK(a.cases[0].estimate == b.cases[0].estimate);
    CHECK(a.cases[0].std_error == b.cases[0].std_error);
    CHECK(a.cases[0].flatness[1].mean == b.cases[0].flatness[1].mean);
    CHECK(a.forward_mean.back().mc_mean == b.forward_mean.back().mc_mean);
}

TEST_CASE("nontrivial real system stays flat") {
    // Complex f with a real part exercises exp(Vbar) away from the trivial value 1.
    const Grid g(1.0, 100);
    McOptions opt;
    opt.paths = 20000;
    const auto report = mc_transform(acceptance_model(), TestFunction::complex_const({-0.5, 1.0}, g), opt);
    const auto& c = report.cases[0];
    CHECK(c.theory_bar < 1.0);
    CHECK(c.passed);
    for (const auto& p : c.flatness_bar) {
        INFO("t=" << p.t << " gap=" << p.gap << " tol=" << p.tolerance);
        CHECK(p.passed);
    }
}
}
