#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "affvol/errors.hpp"

namespace affvol {

// Density intensity * rate * exp(-rate xi) on (0, inf).
struct ExponentialJumps {
    double intensity;
    double rate;
};

struct PointMassJumps {
    double intensity;
    double size;
};

// Quadrature-only measure sum_j weights_j delta_{nodes_j}.
struct TabulatedJumps {
    std::vector<double> nodes;
    std::vector<double> weights;
};

class LevyMeasure {
public:
    using Variant = std::variant<ExponentialJumps, PointMassJumps, TabulatedJumps>;

    static LevyMeasure none();
    static LevyMeasure exponential(double intensity, double rate);
    static LevyMeasure point_mass(double intensity, double size);
    static LevyMeasure tabulated(std::vector<double> nodes, std::vector<double> weights);

    const Variant& variant() const noexcept { return variant_; }

    // int (e^{u xi} - 1 - u xi) nu(d xi), Re u <= 0.
    std::complex<double> transform(std::complex<double> u) const;
    double transform(double u) const;

    double total_mass() const;
    double mean_size() const;       // first moment / total mass
    double first_moment() const;    // int xi nu(d xi)
    double second_moment() const;   // int xi^2 nu(d xi)
    bool is_zero() const { return total_mass() == 0.0; }
    bool samplable() const noexcept { return !std::holds_alternative<TabulatedJumps>(variant_); }
    std::string describe() const;

    // Sum of Poisson(total_mass * local_intensity) i.i.d. sizes from nu / total_mass.
    // Draw order: one Poisson count (skipped when its mean is zero), then the sizes.
    template <class Engine>
    double sample_jump_sum(double local_intensity, Engine& engine) const;

private:
    explicit LevyMeasure(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

std::complex<double> jump_transform(const LevyMeasure& nu, std::complex<double> u);
double second_moment(const LevyMeasure& nu);

// e^z - 1 - z without cancellation for small |z|.
std::complex<double> expm1_minus_z(std::complex<double> z);
double expm1_minus_z(double x);

template <class Engine>
double LevyMeasure::sample_jump_sum(double local_intensity, Engine& engine) const {
    if (!samplable()) throw CapabilityError("tabulated jump measure is quadrature-only and cannot be sampled");
    if (local_intensity < 0.0) throw DomainError("jump sampler needs a nonnegative local intensity");
    const double mean = total_mass() * local_intensity;
    if (!(mean > 0.0)) return 0.0;
    const int count = boost::random::poisson_distribution<int, double>(mean)(engine);
    if (count == 0) return 0.0;
    if (const auto* e = std::get_if<ExponentialJumps>(&variant_)) {
        boost::random::exponential_distribution<double> size(e->rate);
        double sum = 0.0;
        for (int k = 0; k < count; ++k) sum += size(engine);
        return sum;
    }
    return count * std::get<PointMassJumps>(variant_).size;
}

}  // namespace affvol
