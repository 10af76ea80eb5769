#pragma once

#include <string>
#include <variant>
#include <vector>

#include "affvol/grid.hpp"

namespace affvol {

struct ConstantKernel {
    double level;
};

// t^(alpha-1) / Gamma(alpha)
struct FractionalKernel {
    double alpha;
};

// level * exp(-rate t)
struct ExponentialKernel {
    double level;
    double rate;
};

// t^(alpha-1) exp(-rate t) / Gamma(alpha)
struct GammaKernel {
    double alpha;
    double rate;
};

// Piecewise linear through values[k] at t = k * spacing, constant past the last knot.
struct TabulatedKernel {
    double spacing;
    std::vector<double> values;
};

class Kernel {
public:
    using Variant =
        std::variant<ConstantKernel, FractionalKernel, ExponentialKernel, GammaKernel, TabulatedKernel>;

    static Kernel constant(double level);
    static Kernel fractional(double alpha);
    static Kernel exponential(double level, double rate);
    static Kernel gamma(double alpha, double rate);
    static Kernel tabulated(double spacing, std::vector<double> values);

    const Variant& variant() const noexcept { return variant_; }

    double operator()(double t) const;
    // Integral of K over [a, b], 0 <= a <= b.
    double integral(double a, double b) const;
    // Integral of tau * K(tau) over [a, b].
    double first_moment(double a, double b) const;
    // K'(t) for t > 0.
    double derivative(double t) const;

    bool singular_at_zero() const noexcept;
    bool completely_monotone() const noexcept;
    bool is_constant() const noexcept;
    std::string describe() const;

private:
    explicit Kernel(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

double eval_kernel(const Kernel& k, double t);

// w_i = integral of K over [t_i, t_{i+1}], i = 0..N-1.
std::vector<double> cell_weights(const Kernel& k, const Grid& g);

// (Delta_h K)'(u) = K'(u + h).
double shifted_kernel_derivative(const Kernel& k, double h, double u);

}  // namespace affvol
