#include <doctest.h>

#include <algorithm>

#include "affvol/errors.hpp"
#include "affvol/verify.hpp"
#include "common.hpp"

using namespace affvol;

namespace {

SuiteConfig degenerate_suite(const Grid& g) {
    SuiteConfig cfg{ModelSpec{Kernel::fractional(0.6), 0.0, 0.0, LevyMeasure::none(),
                              InputCurve::constant_plus_ktheta(0.3, 0.0)},
                    TestFunction::zero(g)};
    cfg.mc.paths = 500;
    cfg.past_paths = 50;
    return cfg;
}

}  // namespace

TEST_SUITE("verify") {
TEST_CASE("degenerate configuration passes with zero magnitudes") {
    const Grid g(1.0, 100);
    const auto reports = run_suite(degenerate_suite(g));
    CHECK(reports.size() == claim_ids().size());
    CHECK(all_passed(reports));
    for (const auto& r : reports) {
        INFO(r.claim << " " << to_string(r.status) << " " << r.magnitude << " " << r.detail);
        CHECK(r.status != ClaimStatus::fail);
        if (r.status == ClaimStatus::pass && r.claim.rfind("simulate.", 0) != 0) CHECK(r.magnitude <= 1e-12);
    }
}

TEST_CASE("disabled claims are skipped") {
    const Grid g(1.0, 100);
    auto cfg = degenerate_suite(g);
    cfg.disabled = {"simulate.transform", "pastform.bound"};
    for (const auto& r : run_suite(cfg)) {
        if (cfg.disabled.count(r.claim)) CHECK(r.status == ClaimStatus::skipped);
    }
}

TEST_CASE("results do not depend on the worker count") {
    const Grid g(1.0, 60);
    SuiteConfig cfg{affvol::testing::acceptance_model(), TestFunction::imag_const(1.0, g)};
    cfg.mc.paths = 2000;
    cfg.past_paths = 20;
    cfg.disabled = {"kernel.resolvent_identity", "pastform.pi_tilde_routes"};
    const auto one = run_suite(cfg);
    cfg.mc.workers = 4;
    const auto four = run_suite(cfg);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].status == four[i].status);
        CHECK(one[i].magnitude == four[i].magnitude);
    }
}

TEST_CASE("test functions with positive real part are rejected before any claim runs") {
    const Grid g(1.0, 10);
    CHECK_THROWS_AS(TestFunction::complex_const({0.1, 1.0}, g), DomainError);
}

TEST_CASE("random admissible sweep") {
    std::mt19937_64 rng(20240601);
    const Grid g(1.0, 100);
    for (int k = 0; k < 5; ++k) {
        const auto c = random_admissible_case(rng, g);
        CHECK(c.u >= 0.25);
        CHECK(c.u <= 4.0);
        CHECK_NOTHROW(c.model.validate());
    }
}
}
