#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "affvol/pastform.hpp"
#include "affvol/resolvent.hpp"
#include "affvol/riccati.hpp"
#include "affvol/simulate.hpp"
#include "common.hpp"

using namespace affvol;
using affvol::testing::acceptance_model;
using affvol::testing::classical_model;

namespace {

const std::vector<double> kFractions{0.25, 0.5, 0.75};

}  // namespace

TEST_SUITE("pastform") {
TEST_CASE("zero test function") {
    const Grid g(1.0, 100);
    const auto m = acceptance_model();
    const auto f = TestFunction::zero(g);
    const auto sol = solve_riccati(m, f);
    const PastFormula past(m, f, sol, checkpoint_nodes(g, kFractions));
    for (std::size_t s = 0; s < 3; ++s) {
        for (const complex& v : past.pi(s).values) CHECK(v == complex(0.0, 0.0));
    }
    const auto paths = simulate_paths(m, g, 4, 2);
    for (std::size_t p = 0; p < 4; ++p) {
        for (std::size_t s = 0; s < 3; ++s) CHECK(past.evaluate(s, paths.x.row(p)) == complex(0.0, 0.0));
    }
}

TEST_CASE("constant kernel reduces to psi(h)") {
    const Grid g(1.0, 200);
    const auto m = classical_model(-0.3, 0.09, LevyMeasure::exponential(0.5, 10.0));
    const auto f = TestFunction::imag_const(1.0, g);
    const auto sol = solve_riccati(m, f);
    const PastFormula past(m, f, sol, checkpoint_nodes(g, kFractions));
    for (std::size_t s = 0; s < 3; ++s) {
        const auto& pi = past.pi(s);
        const complex psi_h = sol.psi[pi.lag_steps];
        for (const complex& v : pi.values) CHECK(std::abs(v - psi_h) <= 1e-12);
        for (const complex& d : pi.increments()) CHECK(std::abs(d) <= 1e-12);
    }
}

TEST_CASE("two routes to Pi~ agree") {
    const Grid g(1.0, 300);
    const auto m = acceptance_model();
    const auto sol = solve_riccati(m, TestFunction::imag_const(1.0, g));
    // Same closed-form resolvent on both sides; only the quadrature route differs.
    const auto analytic = resolvent_first_kind(m.kernel, g, ResolventMethod::automatic);
    REQUIRE(analytic.source == ResolventSource::analytic);
    const std::size_t lag = 150;
    const auto pi = compute_pi_tilde(analytic, sol.psi, sol.generator, lag);
    CHECK(std::abs(pi.identity_defect) <= 1e-2);
    for (std::size_t k : {std::size_t{1}, std::size_t{40}, std::size_t{150}}) {
        const complex quad = pi_tilde_double_quadrature(m.kernel, analytic, sol.generator, lag, g.node(k));
        INFO("r=" << g.node(k) << " discrete=" << pi.values[k] << " quadrature=" << quad);
        CHECK(std::abs(pi.values[k] - quad) <= 1e-3);
    }
}

TEST_CASE("past formula agrees with the forward formula") {
    SUBCASE("constant kernel is exact") {
        const Grid g(1.0, 200);
        const auto m = classical_model(-0.3, 0.09, LevyMeasure::exponential(0.5, 10.0));
        const auto paths = simulate_paths(m, g, 50, 8);
        const auto report = past_check(m, TestFunction::imag_const(1.0, g), paths, kFractions);
        CHECK(report.max_two_formula_gap <= 1e-8);
    }
    SUBCASE("fractional kernel") {
        const Grid g(1.0, 300);
        const auto m = acceptance_model();
        const auto paths = simulate_paths(m, g, 200, 8);
        const auto report = past_check(m, TestFunction::imag_const(1.0, g), paths, kFractions);
        CHECK(report.max_two_formula_gap <= 1e-2);
        CHECK(report.max_gap_monotonicity_violation <= 1e-8);
        CHECK(report.bound.violations == 0);
        CHECK(report.bound.constant.c >= 1.0);
        CHECK(std::isfinite(report.bound.constant.c));
    }
}

TEST_CASE("bound constant") {
    const Grid g(1.0, 200);
    auto m = acceptance_model();
    SUBCASE("real test function") {
        const auto f = TestFunction::complex_const(-0.8, g);
        const auto sol = solve_riccati(m, f);
        const auto l = resolvent_first_kind(m.kernel, g, ResolventMethod::discrete);
        const auto c = bound_constant(sol, m.g0.sample(m.kernel, g), l);
        CHECK(c.c1 == 0.0);
        CHECK(c.c2 == 0.0);
        CHECK(c.c3 == 0.0);
        CHECK(c.c == 1.0);
        const auto paths = simulate_paths(m, g, 30, 3);
        const PastFormula past(m, f, sol, checkpoint_nodes(g, kFractions));
        const auto report = check_bound(paths, past, c);
        CHECK(report.violations == 0);
        CHECK(std::abs(report.worst_log_ratio) <= 1e-12);
    }
    SUBCASE("vanishing input curve") {
        m.g0 = InputCurve::monotone_table(Table{{0.0, 1.0}, {0.0, 0.0}});
        const auto sol = solve_riccati(m, TestFunction::imag_const(1.0, g));
        const auto l = resolvent_first_kind(m.kernel, g, ResolventMethod::discrete);
        const auto c = bound_constant(sol, m.g0.sample(m.kernel, g), l);
        CHECK(c.c1 == 0.0);
        CHECK(c.c2 == 0.0);
    }
}
}
