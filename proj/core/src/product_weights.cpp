#include "affvol/product_weights.hpp"

#include <variant>

#include <boost/math/quadrature/gauss.hpp>

namespace affvol {

double centered_moment(const Kernel& k, double a, double b) {
    if (a == 0.0) return k.first_moment(0.0, b);
    if (std::holds_alternative<TabulatedKernel>(k.variant())) {
        return k.first_moment(a, b) - a * k.integral(a, b);
    }
    // Away from the origin the integrand is analytic on a Bernstein ellipse of
    // comfortable size, so a fixed Gauss rule is at rounding level.
    auto integrand = [&](double tau) { return (tau - a) * k(tau); };
    return boost::math::quadrature::gauss<double, 20>::integrate(integrand, a, b);
}

ProductWeights::ProductWeights(const Kernel& k, const Grid& g) : grid(g) {
    const std::size_t n = g.steps();
    const double dt = g.step();
    cell.resize(n);
    lower.resize(n);
    upper.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = g.node(j);
        const double b = g.node(j + 1);
        cell[j] = k.integral(a, b);
        upper[j] = centered_moment(k, a, b) / dt;
        lower[j] = cell[j] - upper[j];
    }
    mid.resize(n);
    mid[0] = lower[0];
    for (std::size_t m = 1; m < n; ++m) mid[m] = lower[m] + upper[m - 1];
}

}  // namespace affvol
