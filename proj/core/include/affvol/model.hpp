#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "affvol/grid.hpp"
#include "affvol/kernel.hpp"
#include "affvol/levy.hpp"

namespace affvol {

// Piecewise-linear function given by (time, value) knots; constant outside the table.
struct Table {
    std::vector<double> times;
    std::vector<double> values;

    double operator()(double t) const;
};

// g0 = x0 + K * theta
struct ConstantPlusKTheta {
    double x0;
    Table theta;
};

// continuous nondecreasing curve with g0(0) = 0
struct MonotoneTable {
    Table curve;
};

class InputCurve {
public:
    using Variant = std::variant<ConstantPlusKTheta, MonotoneTable>;

    static InputCurve constant_plus_ktheta(double x0, double theta);
    static InputCurve constant_plus_ktheta(double x0, Table theta);
    static InputCurve monotone_table(Table curve);

    const Variant& variant() const noexcept { return variant_; }
    // g0(t_i) on the grid; the K * theta term uses product-trapezoid quadrature.
    std::vector<double> sample(const Kernel& k, const Grid& g) const;
    // True when g0 is constant in time.
    bool is_constant() const;
    std::string describe() const;

private:
    explicit InputCurve(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

// b(x) = b0 + b x, a(x) = a0 + c x, jump compensator (nu0 + x nu)(d xi).
// The constant parts default to zero.
struct ModelSpec {
    Kernel kernel;
    double b;
    double c;
    LevyMeasure jumps;
    InputCurve g0;
    double b0 = 0.0;
    double a0 = 0.0;
    LevyMeasure jumps0 = LevyMeasure::none();

    void validate() const;
    bool has_constant_terms() const { return b0 != 0.0 || a0 != 0.0 || !jumps0.is_zero(); }
};

// Samples of f on the grid, Re f <= 0.
class TestFunction {
public:
    static TestFunction zero(const Grid& g);
    static TestFunction imag_const(double u, const Grid& g);
    static TestFunction complex_const(std::complex<double> w, const Grid& g);
    static TestFunction from_samples(std::vector<std::complex<double>> samples, const Grid& g);
    static TestFunction from_table(const Table& re, const Table& im, const Grid& g);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const std::complex<double>> samples() const noexcept { return samples_; }
    std::complex<double> operator[](std::size_t i) const { return samples_[i]; }
    std::vector<double> real_part() const;
    bool is_real() const;
    bool is_constant() const;
    bool is_zero() const;

private:
    TestFunction(std::vector<std::complex<double>> s, const Grid& g);
    std::vector<std::complex<double>> samples_;
    Grid grid_;
};

}  // namespace affvol
