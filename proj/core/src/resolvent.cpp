#include "affvol/resolvent.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "affvol/convolution.hpp"
#include "affvol/errors.hpp"
#include "affvol/volterra.hpp"

namespace affvol {
namespace {

FirstKindResolvent deconvolve(const Kernel& k, const Grid& g, double tolerance) {
    const std::size_t n = g.steps();
    const auto w = cell_weights(k, g);
    const double dt = g.step();
    std::vector<double> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = w[j] / dt;
    if (!(a[0] > 0.0)) throw CapabilityError("first-kind resolvent needs a kernel with positive mass near 0");

    // sum_{j<=i} m_j a_{i-j} = 1 for i = 0..N-1
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 1.0;
        for (std::size_t j = 0; j < i; ++j) acc -= m[j] * a[i - j];
        m[i] = acc / a[0];
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += m[j] * a[i - j];
        residual = std::max(residual, std::abs(acc - 1.0));
    }
    if (!(residual <= tolerance)) {
        std::ostringstream os;
        os << "first-kind deconvolution ill-conditioned: residual " << residual;
        throw SolverError(os.str(), n, residual);
    }

    FirstKindResolvent l{g, 0.0, std::move(m), ResolventSource::discrete_deconvolution, residual};
    // A bounded kernel has L({0}) = 1/K(0) > 0: the first mass carries the atom plus a
    // density cell, which is taken equal to its neighbour's.
    if (!k.singular_at_zero() && n >= 2) {
        const double split = l.cell_mass[0] - l.cell_mass[1];
        if (split > 0.0) {
            l.atom = split;
            l.cell_mass[0] = l.cell_mass[1];
        }
    }
    return l;
}

}  // namespace

std::string to_string(ResolventSource s) {
    return s == ResolventSource::analytic ? "analytic" : "discrete-deconvolution";
}

double FirstKindResolvent::total_mass() const {
    return atom + std::accumulate(cell_mass.begin(), cell_mass.end(), 0.0);
}

std::vector<double> FirstKindResolvent::density() const {
    std::vector<double> out(cell_mass.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = cell_mass[j] / grid.step();
    return out;
}

double fractional_resolvent_density(double alpha, double t) {
    if (alpha >= 1.0) return 0.0;
    return std::pow(t, -alpha) / std::tgamma(1.0 - alpha);
}

FirstKindResolvent resolvent_first_kind(const Kernel& k, const Grid& g, ResolventMethod method,
                                        double tolerance) {
    const std::size_t n = g.steps();
    if (method == ResolventMethod::automatic) {
        if (k.is_constant()) {
            const double level = k(1.0);
            if (!(level > 0.0)) throw CapabilityError("zero kernel has no resolvent of the first kind");
            FirstKindResolvent l{g, 1.0 / level, std::vector<double>(n, 0.0), ResolventSource::analytic, 0.0};
            return l;
        }
        if (const auto* frac = std::get_if<FractionalKernel>(&k.variant())) {
            const double p = 1.0 - frac->alpha;
            const double norm = std::tgamma(2.0 - frac->alpha);
            FirstKindResolvent l{g, 0.0, std::vector<double>(n), ResolventSource::analytic, 0.0};
            // cell integrals of t^{-alpha}/Gamma(1-alpha)
            for (std::size_t j = 0; j < n; ++j) {
                const double a = g.node(j), b = g.node(j + 1);
                l.cell_mass[j] =
                    (j == 0 ? std::pow(b, p) : std::pow(a, p) * std::expm1(p * std::log1p((b - a) / a))) / norm;
            }
            const auto identity = resolvent_identity(k, l);
            for (std::size_t i = 1; i <= n; ++i) {
                l.identity_residual = std::max(l.identity_residual, std::abs(identity[i] - 1.0));
            }
            return l;
        }
    }
    return deconvolve(k, g, tolerance);
}

std::vector<double> resolvent_identity(const Kernel& k, const FirstKindResolvent& l) {
    const Grid& g = l.grid;
    const std::size_t n = g.steps();
    std::vector<double> out(n + 1, 1.0);
    if (l.source == ResolventSource::analytic) {
        const auto* frac = std::get_if<FractionalKernel>(&k.variant());
        if (frac && frac->alpha < 1.0) {
            const double alpha = frac->alpha;
            boost::math::quadrature::tanh_sinh<double> quad;
            for (std::size_t i = 1; i <= n; ++i) {
                const double t = g.node(i);
                // split at t/2 so each piece has its singularity at the left end
                auto near_density = [&](double s) { return k(t - s) * fractional_resolvent_density(alpha, s); };
                auto near_kernel = [&](double u) { return k(u) * fractional_resolvent_density(alpha, t - u); };
                out[i] = quad.integrate(near_density, 0.0, 0.5 * t, 1e-12) +
                         quad.integrate(near_kernel, 0.0, 0.5 * t, 1e-12);
            }
            return out;
        }
        for (std::size_t i = 1; i <= n; ++i) {
            double acc = l.atom * k(g.node(i));
            for (std::size_t j = 0; j < i; ++j) {
                acc += l.cell_mass[j] * k.integral(g.node(i - 1 - j), g.node(i - j)) / g.step();
            }
            out[i] = acc;
        }
        return out;
    }
    return resolvent_identity_cellwise(k, l);
}

std::vector<double> resolvent_identity_cellwise(const Kernel& k, const FirstKindResolvent& l) {
    const Grid& g = l.grid;
    const std::size_t n = g.steps();
    const auto w = cell_weights(k, g);
    std::vector<double> out(n + 1, 1.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = l.atom * w[i - 1];
        for (std::size_t j = 0; j < i; ++j) acc += l.cell_mass[j] * w[i - 1 - j];
        out[i] = acc / g.step();
    }
    return out;
}

SecondKindResolvent resolvent_second_kind(const Kernel& k, double b, const Grid& g) {
    const ProductWeights pw(k, g);
    const std::size_t n = g.steps();
    std::vector<double> kernel_mass(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) kernel_mass[i] = kernel_mass[i - 1] + pw.cell[i - 1];

    // rho = int_0^. R_B solves rho = -b W + K * (b rho), W = int_0^. K
    std::vector<double> forcing(n + 1);
    for (std::size_t i = 0; i <= n; ++i) forcing[i] = -b * kernel_mass[i];
    SecondKindResolvent r{g, b, {}, {}, {}, {}, {}, 0.0};
    r.integrated = solve_volterra<double>(
        pw, [b](std::size_t, double y) { return b * y; }, std::span<const double>(forcing));
    r.kernel_integrated = convolve<double>(pw, r.integrated);
    for (std::size_t i = 0; i <= n; ++i) {
        r.residual = std::max(r.residual, std::abs(r.integrated[i] - forcing[i] - b * r.kernel_integrated[i]));
    }

    r.cell_mass.resize(n);
    for (std::size_t j = 0; j < n; ++j) r.cell_mass[j] = r.integrated[j + 1] - r.integrated[j];

    const double inf = std::numeric_limits<double>::infinity();
    r.resolvent.assign(n + 1, 0.0);
    r.canonical.assign(n + 1, 0.0);
    r.resolvent[0] = k.singular_at_zero() ? (b == 0.0 ? 0.0 : -b * inf) : -b * k(0.0);
    r.canonical[0] = k.singular_at_zero() ? inf : k(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double conv = 0.0;  // (R_B * K)(t_i) with R_B constant on cells
        for (std::size_t j = 0; j < i; ++j) conv += r.cell_mass[j] * pw.cell[i - 1 - j];
        conv /= g.step();
        const double ki = k(g.node(i));
        r.resolvent[i] = -b * ki + b * conv;
        r.canonical[i] = ki - conv;
    }
    return r;
}

}  // namespace affvol
