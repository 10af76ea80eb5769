#pragma once

#include <cstddef>
#include <vector>

#include "affvol/grid.hpp"
#include "affvol/kernel.hpp"

namespace affvol {

// Product-trapezoid weights: on kernel cell k = [t_k, t_{k+1}] the smooth factor is
// interpolated linearly, so
//   lower[k] = int K(tau) (t_{k+1} - tau) / step,  upper[k] = int K(tau) (tau - t_k) / step,
// and (K * F)(t_i) ~ sum_m coefficient(i, m) F_{i-m}.
struct ProductWeights {
    Grid grid;
    std::vector<double> cell;   // lower + upper
    std::vector<double> lower;
    std::vector<double> upper;
    // mid[0] = lower[0], mid[m] = lower[m] + upper[m-1]
    std::vector<double> mid;

    ProductWeights(const Kernel& k, const Grid& g);

    // Weight of F_{i-m} in the quadrature of (K * F)(t_i), 0 <= m <= i.
    double coefficient(std::size_t i, std::size_t m) const {
        double c = 0.0;
        if (m < i) c += lower[m];
        if (m >= 1) c += upper[m - 1];
        return c;
    }
};

// integral_a^b (tau - a) K(tau) dtau
double centered_moment(const Kernel& k, double a, double b);

}  // namespace affvol
