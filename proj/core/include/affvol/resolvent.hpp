#pragma once

#include <string>
#include <vector>

#include "affvol/grid.hpp"
#include "affvol/kernel.hpp"
#include "affvol/product_weights.hpp"

namespace affvol {

enum class ResolventSource { analytic, discrete_deconvolution };

enum class ResolventMethod {
    automatic,  // analytic where a closed form exists, deconvolution otherwise
    discrete,   // always deconvolve the cell-averaged kernel
};

std::string to_string(ResolventSource s);

// L = atom * delta_0 + density; the density is stored as cell masses on [t_j, t_{j+1}].
struct FirstKindResolvent {
    Grid grid;
    double atom = 0.0;
    std::vector<double> cell_mass;
    ResolventSource source = ResolventSource::analytic;
    double identity_residual = 0.0;

    double total_mass() const;
    // Cell-average density, one value per cell.
    std::vector<double> density() const;
};

FirstKindResolvent resolvent_first_kind(const Kernel& k, const Grid& g,
                                        ResolventMethod method = ResolventMethod::automatic,
                                        double tolerance = 1e-8);

// (K * L)(t_i) for i = 1..N (entry 0 unused and set to 1).  Analytic resolvents are
// checked with tanh-sinh quadrature of the closed-form density; deconvolved ones by
// the discrete identity they were built from.
std::vector<double> resolvent_identity(const Kernel& k, const FirstKindResolvent& l);

// Same identity with the cell-mass / cell-average pairing used by the path scheme.
// Its error at a fixed time shrinks as the grid is refined.
std::vector<double> resolvent_identity_cellwise(const Kernel& k, const FirstKindResolvent& l);

// Closed-form density of the fractional resolvent, t^{-alpha} / Gamma(1 - alpha).
double fractional_resolvent_density(double alpha, double t);

struct SecondKindResolvent {
    Grid grid;
    double slope = 0.0;
    std::vector<double> integrated;      // rho(t_i) = int_0^{t_i} R_B
    std::vector<double> cell_mass;       // rho(t_{j+1}) - rho(t_j)
    std::vector<double> resolvent;       // R_B(t_i)
    std::vector<double> canonical;       // E_B(t_i) = K(t_i) - (R_B * K)(t_i)
    std::vector<double> kernel_integrated;  // (K * rho)(t_i) = int_0^{t_i} (R_B * K)
    double residual = 0.0;
};

// Resolvent of the second kind for the kernel -b K, with E_B alongside.
SecondKindResolvent resolvent_second_kind(const Kernel& k, double b, const Grid& g);

}  // namespace affvol
