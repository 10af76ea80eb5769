#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "affvol/convolution.hpp"
#include "affvol/errors.hpp"
#include "affvol/product_weights.hpp"
#include "affvol/resolvent.hpp"

using namespace affvol;

namespace {

double max_identity_error(const std::vector<double>& identity) {
    double worst = 0.0;
    for (std::size_t i = 1; i < identity.size(); ++i) worst = std::max(worst, std::abs(identity[i] - 1.0));
    return worst;
}

}  // namespace

TEST_SUITE("resolvent") {
TEST_CASE("constant kernel has the Dirac resolvent") {
    const Grid g(1.0, 50);
    const auto l = resolvent_first_kind(Kernel::constant(1.0), g);
    CHECK(l.atom == doctest::Approx(1.0));
    for (double m : l.cell_mass) CHECK(m == 0.0);
}

TEST_CASE("fractional resolvent identity") {
    for (double alpha : {0.6, 0.75}) {
        const Grid g(1.0, 2000);
        const Kernel k = Kernel::fractional(alpha);
        const auto l = resolvent_first_kind(k, g);
        CHECK(l.source == ResolventSource::analytic);
        CHECK(l.atom == 0.0);
        CHECK(max_identity_error(resolvent_identity(k, l)) <= 1e-3);
        CHECK(fractional_resolvent_density(alpha, 0.3) ==
              doctest::Approx(std::pow(0.3, -alpha) / std::tgamma(1.0 - alpha)).epsilon(1e-14));
    }
}

TEST_CASE("exponential kernel is deconvolved") {
    const Grid g(1.0, 400);
    const Kernel k = Kernel::exponential(1.0, 1.0);
    const auto l = resolvent_first_kind(k, g);
    CHECK(l.source == ResolventSource::discrete_deconvolution);
    CHECK(l.identity_residual <= 1e-8);
    CHECK(max_identity_error(resolvent_identity(k, l)) <= 1e-8);
    // L = delta_0 / k0 + (rho / k0) dt for k0 e^{-rho t}.
    CHECK(l.atom == doctest::Approx(1.0).epsilon(1e-2));
    const auto density = l.density();
    CHECK(density[g.steps() / 2] == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("cellwise identity improves under refinement") {
    const Kernel k = Kernel::fractional(0.6);
    double previous = INFINITY;
    for (std::size_t n : {100, 200, 400, 800}) {
        const Grid g(1.0, n);
        const auto l = resolvent_first_kind(k, g);
        const auto identity = resolvent_identity_cellwise(k, l);
        const double err = std::abs(identity[g.index_of(0.5)] - 1.0);
        CHECK(err < previous);
        previous = err;
    }
}
}

TEST_SUITE("resolvent_second_kind") {
TEST_CASE("zero slope") {
    const Grid g(1.0, 100);
    const Kernel k = Kernel::fractional(0.6);
    const auto r = resolvent_second_kind(k, 0.0, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(r.resolvent[i] == 0.0);
        if (i > 0) CHECK(r.canonical[i] == doctest::Approx(k(g.node(i))).epsilon(1e-14));
    }
}

TEST_CASE("constant kernel matches the scalar ODE") {
    const Grid g(1.0, 1000);
    for (double b : {-0.3, 0.5}) {
        const auto r = resolvent_second_kind(Kernel::constant(1.0), b, g);
        double worst_r = 0.0, worst_e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double t = g.node(i);
            worst_r = std::max(worst_r, std::abs(r.resolvent[i] - (-b) * std::exp(b * t)));
            worst_e = std::max(worst_e, std::abs(r.canonical[i] - std::exp(b * t)));
        }
        CHECK(worst_r <= 1e-6);
        CHECK(worst_e <= 1e-6);
    }
}

TEST_CASE("fractional canonical resolvent against a Mittag-Leffler series") {
    // t^{a-1} E_{a,a}(b t^a) for a = 0.6, b = -0.3, evaluated offline.
    const Grid g(1.0, 1000);
    const auto r = resolvent_second_kind(Kernel::fractional(0.6), -0.3, g);
    CHECK(r.canonical[500] == doctest::Approx(0.649791975443186426).epsilon(1e-3));
    CHECK(r.canonical[1000] == doctest::Approx(0.423141190841616699).epsilon(1e-3));
}
}

TEST_SUITE("convolution") {
TEST_CASE("exact on linear functions") {
    const Grid g(1.0, 100);
    const ProductWeights one(Kernel::constant(1.0), g);
    const std::vector<double> ones(g.size(), 1.0);
    const auto t = convolve<double>(one, ones);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(t[i] - g.node(i)) <= 1e-12);

    const std::vector<double> zeros(g.size(), 0.0);
    for (double v : convolve<double>(one, zeros)) CHECK(v == 0.0);
}

TEST_CASE("fractional kernel against its antiderivative") {
    const Grid g(1.0, 200);
    const ProductWeights pw(Kernel::fractional(0.6), g);
    const std::vector<double> ones(g.size(), 1.0);
    const auto out = convolve<double>(pw, ones);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(out[i] - std::pow(g.node(i), 0.6) / std::tgamma(1.6)) <= 1e-6);
    }
    CHECK(out[100] == doctest::Approx(0.738380102717208459).epsilon(1e-10));
}

TEST_CASE("length mismatch") {
    const Grid g(1.0, 10);
    const ProductWeights pw(Kernel::constant(1.0), g);
    const std::vector<double> short_samples(5, 1.0);
    CHECK_THROWS_AS(convolve<double>(pw, short_samples), ContractError);
}

TEST_CASE("sampled convolution is associative up to quadrature error") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Grid g(1.0, 64);
        auto smooth = [&] {
            const double a = coef(rng), b = coef(rng), c = coef(rng);
            std::vector<double> v(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double t = g.node(i);
                v[i] = a + b * t + c * std::sin(3.0 * t);
            }
            return v;
        };
        const auto f = smooth(), h = smooth(), k = smooth();
        const auto left = convolve(convolve(f, h, g), k, g);
        const auto right = convolve(f, convolve(h, k, g), g);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(left[i] - right[i]) <= 1e-3);
    }
}
}
