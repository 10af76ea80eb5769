#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <complex>
#include <random>

#include "affvol/errors.hpp"
#include "affvol/levy.hpp"
#include "affvol/philox.hpp"

using namespace affvol;

namespace {

// Direct quadrature of int (e^{u xi} - 1 - u xi) lambda beta e^{-beta xi} d xi.
double exponential_transform_oracle(double lambda, double beta, double u) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double xi) {
        return (std::exp(u * xi) - 1.0 - u * xi) * lambda * beta * std::exp(-beta * xi);
    });
}

}  // namespace

TEST_SUITE("levy") {
TEST_CASE("jump transform") {
    const auto exp_jumps = LevyMeasure::exponential(1.0, 1.0);
    CHECK(jump_transform(exp_jumps, 0.0) == std::complex<double>(0.0, 0.0));
    CHECK(exp_jumps.transform(-1.0) == doctest::Approx(exponential_transform_oracle(1.0, 1.0, -1.0)).epsilon(1e-10));
    CHECK(exp_jumps.transform(-1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(exp_jumps.transform(-3.7) == doctest::Approx(exponential_transform_oracle(1.0, 1.0, -3.7)).epsilon(1e-10));

    const auto point = LevyMeasure::point_mass(2.0, 1.0);
    CHECK(point.transform(-1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(point.transform(-1.0) == doctest::Approx(0.735759).epsilon(1e-6));

    CHECK_THROWS_AS(jump_transform(exp_jumps, {0.1, 1.0}), DomainError);
}

TEST_CASE("real part of the transform is dominated by the transform of the real part") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-5.0, 0.0);
    std::uniform_real_distribution<double> im(-10.0, 10.0);
    for (const auto& nu : {LevyMeasure::exponential(0.5, 10.0), LevyMeasure::point_mass(2.0, 0.7),
                           LevyMeasure::tabulated({0.1, 0.5}, {1.0, 3.0})}) {
        for (int s = 0; s < 200; ++s) {
            const std::complex<double> u(re(rng), im(rng));
            CHECK(jump_transform(nu, u).real() <= nu.transform(u.real()) + 1e-12);
        }
    }
}

TEST_CASE("small-argument expm1_minus_z") {
    CHECK(expm1_minus_z(1e-9) == doctest::Approx(0.5e-18).epsilon(1e-6));
    CHECK(expm1_minus_z(-2.0) == doctest::Approx(std::exp(-2.0) + 1.0).epsilon(1e-15));
}

TEST_CASE("second moment") {
    CHECK(second_moment(LevyMeasure::point_mass(2.0, 1.0)) == doctest::Approx(2.0));
    CHECK(second_moment(LevyMeasure::exponential(1.0, 2.0)) == doctest::Approx(0.5));
    CHECK(second_moment(LevyMeasure::tabulated({1.0, 2.0}, {0.1, 0.2})) == doctest::Approx(0.9));
}

TEST_CASE("jump sampler") {
    PhiloxEngine engine(11, 0);
    CHECK(LevyMeasure::exponential(2.0, 4.0).sample_jump_sum(0.0, engine) == 0.0);
    CHECK_THROWS_AS(LevyMeasure::tabulated({1.0}, {1.0}).sample_jump_sum(1.0, engine), CapabilityError);

    auto mean_and_sd = [&](const LevyMeasure& nu, double intensity, int draws) {
        double sum = 0.0, sum2 = 0.0;
        for (int k = 0; k < draws; ++k) {
            const double x = nu.sample_jump_sum(intensity, engine);
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / draws;
        return std::pair{mean, std::sqrt((sum2 / draws - mean * mean) / draws)};
    };
    const auto [pm_mean, pm_se] = mean_and_sd(LevyMeasure::point_mass(1.0, 2.0), 0.5, 1000000);
    CHECK(std::abs(pm_mean - 1.0) <= 3.0 * pm_se);
    const auto [ex_mean, ex_se] = mean_and_sd(LevyMeasure::exponential(2.0, 4.0), 1.0, 1000000);
    CHECK(std::abs(ex_mean - 0.5) <= 3.0 * ex_se);
}
}
