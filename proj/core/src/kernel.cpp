#include "affvol/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "affvol/errors.hpp"

namespace affvol {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_alpha(double alpha) {
    if (!(alpha > 0.5 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "kernel order alpha=" << alpha
           << " outside (1/2, 1]: t^(alpha-1) is square integrable near 0 (L2_loc) only for alpha > 1/2";
        throw DomainError(os.str());
    }
}

void check_rate(double rate, const char* what) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw DomainError(std::string(what) + " must be finite and nonnegative");
    }
}

// (1 - e^{-x}) / x
double phi1(double x) { return x == 0.0 ? 1.0 : -std::expm1(-x) / x; }

// (1 - e^{-x}(1 + x)) / x^2, i.e. integral_0^1 s e^{-x s} ds
double phi2(double x) {
    if (std::abs(x) < 0.1) {
        double term = 1.0;
        double sum = 0.0;
        for (int k = 0; k < 14; ++k) {
            sum += term / (k + 2);
            term *= -x / (k + 1);
        }
        return sum;
    }
    return (-std::expm1(-x) - x * std::exp(-x)) / (x * x);
}

// b^p - a^p for 0 <= a <= b, without cancellation when a is close to b.
double power_difference(double a, double b, double p) {
    if (a <= 0.0) return std::pow(b, p);
    return std::pow(a, p) * std::expm1(p * std::log1p((b - a) / a));
}

double gamma_integral(const GammaKernel& k, double a, double b, bool moment) {
    if (b <= a) return 0.0;
    const double alpha = k.alpha;
    const double norm = std::tgamma(alpha + 1.0);
    if (k.rate == 0.0) {
        if (!moment) return power_difference(a, b, alpha) / norm;
        return power_difference(a, b, alpha + 1.0) / ((alpha + 1.0) * std::tgamma(alpha));
    }
    // v = tau^alpha removes the endpoint singularity
    auto integrand = [&](double v) {
        const double tau = std::pow(v, 1.0 / alpha);
        return moment ? tau * std::exp(-k.rate * tau) : std::exp(-k.rate * tau);
    };
    using boost::math::quadrature::gauss_kronrod;
    const double lo = std::pow(a, alpha);
    const double hi = std::pow(b, alpha);
    return gauss_kronrod<double, 21>::integrate(integrand, lo, hi, 6, 1e-11) / norm;
}

double tab_value(const TabulatedKernel& k, double t) {
    const double x = t / k.spacing;
    const std::size_t last = k.values.size() - 1;
    if (x >= static_cast<double>(last)) return k.values.back();
    const auto j = static_cast<std::size_t>(x);
    const double frac = x - static_cast<double>(j);
    return k.values[j] + frac * (k.values[j + 1] - k.values[j]);
}

// Exact for piecewise linear integrands: split at knots, Simpson on each piece.
double tab_integral(const TabulatedKernel& k, double a, double b, bool moment) {
    double total = 0.0;
    double lo = a;
    while (lo < b) {
        const double next_knot = (std::floor(lo / k.spacing + 1e-12) + 1.0) * k.spacing;
        const double hi = std::min(b, next_knot);
        const double mid = 0.5 * (lo + hi);
        const double ylo = tab_value(k, lo), ymid = tab_value(k, mid), yhi = tab_value(k, hi);
        if (moment) {
            total += (hi - lo) / 6.0 * (lo * ylo + 4.0 * mid * ymid + hi * yhi);
        } else {
            total += 0.5 * (hi - lo) * (ylo + yhi);
        }
        if (hi >= b) break;
        lo = hi;
    }
    return total;
}

}  // namespace

Kernel Kernel::constant(double level) {
    if (!(level >= 0.0) || !std::isfinite(level)) throw DomainError("constant kernel level must be >= 0");
    return Kernel(ConstantKernel{level});
}

Kernel Kernel::fractional(double alpha) {
    check_alpha(alpha);
    return Kernel(FractionalKernel{alpha});
}

Kernel Kernel::exponential(double level, double rate) {
    if (!(level >= 0.0) || !std::isfinite(level)) throw DomainError("exponential kernel level must be >= 0");
    check_rate(rate, "exponential kernel rate");
    return Kernel(ExponentialKernel{level, rate});
}

Kernel Kernel::gamma(double alpha, double rate) {
    check_alpha(alpha);
    check_rate(rate, "gamma kernel rate");
    return Kernel(GammaKernel{alpha, rate});
}

Kernel Kernel::tabulated(double spacing, std::vector<double> values) {
    if (!(spacing > 0.0)) throw DomainError("tabulated kernel spacing must be positive");
    if (values.size() < 2) throw DomainError("tabulated kernel needs at least two samples");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
            throw DomainError("tabulated kernel samples must be finite and nonnegative");
        }
        if (i > 0 && values[i] > values[i - 1]) {
            throw DomainError("tabulated kernel samples must be nonincreasing");
        }
    }
    if (values.front() == 0.0) throw DomainError("tabulated kernel is identically zero");
    return Kernel(TabulatedKernel{spacing, std::move(values)});
}

double Kernel::operator()(double t) const {
    if (t < 0.0 || std::isnan(t)) throw DomainError("kernel evaluated at negative time");
    if (t == 0.0 && singular_at_zero()) throw DomainError("singular kernel evaluated at t = 0");
    return std::visit(
        overloaded{
            [](const ConstantKernel& k) { return k.level; },
            [t](const FractionalKernel& k) {
                return k.alpha == 1.0 ? 1.0 : std::pow(t, k.alpha - 1.0) / std::tgamma(k.alpha);
            },
            [t](const ExponentialKernel& k) { return k.level * std::exp(-k.rate * t); },
            [t](const GammaKernel& k) {
                const double power = k.alpha == 1.0 ? 1.0 : std::pow(t, k.alpha - 1.0);
                return power * std::exp(-k.rate * t) / std::tgamma(k.alpha);
            },
            [t](const TabulatedKernel& k) { return tab_value(k, t); },
        },
        variant_);
}

double Kernel::integral(double a, double b) const {
    if (a < 0.0 || b < a) throw ContractError("kernel integral needs 0 <= a <= b");
    return std::visit(
        overloaded{
            [&](const ConstantKernel& k) { return k.level * (b - a); },
            [&](const FractionalKernel& k) {
                return power_difference(a, b, k.alpha) / std::tgamma(k.alpha + 1.0);
            },
            [&](const ExponentialKernel& k) {
                const double h = b - a;
                return k.level * std::exp(-k.rate * a) * h * phi1(k.rate * h);
            },
            [&](const GammaKernel& k) { return gamma_integral(k, a, b, false); },
            [&](const TabulatedKernel& k) { return tab_integral(k, a, b, false); },
        },
        variant_);
}

double Kernel::first_moment(double a, double b) const {
    if (a < 0.0 || b < a) throw ContractError("kernel moment needs 0 <= a <= b");
    return std::visit(
        overloaded{
            [&](const ConstantKernel& k) { return 0.5 * k.level * (b - a) * (b + a); },
            [&](const FractionalKernel& k) {
                return power_difference(a, b, k.alpha + 1.0) / ((k.alpha + 1.0) * std::tgamma(k.alpha));
            },
            [&](const ExponentialKernel& k) {
                const double h = b - a;
                const double x = k.rate * h;
                return k.level * std::exp(-k.rate * a) * (a * h * phi1(x) + h * h * phi2(x));
            },
            [&](const GammaKernel& k) { return gamma_integral(k, a, b, true); },
            [&](const TabulatedKernel& k) { return tab_integral(k, a, b, true); },
        },
        variant_);
}

double Kernel::derivative(double t) const {
    if (!(t > 0.0)) throw DomainError("kernel derivative needs t > 0");
    return std::visit(
        overloaded{
            [](const ConstantKernel&) { return 0.0; },
            [t](const FractionalKernel& k) {
                return (k.alpha - 1.0) * std::pow(t, k.alpha - 2.0) / std::tgamma(k.alpha);
            },
            [t](const ExponentialKernel& k) { return -k.rate * k.level * std::exp(-k.rate * t); },
            [this, t](const GammaKernel& k) { return (*this)(t) * ((k.alpha - 1.0) / t - k.rate); },
            [](const TabulatedKernel&) -> double {
                throw CapabilityError("tabulated kernel carries no derivative information");
            },
        },
        variant_);
}

bool Kernel::singular_at_zero() const noexcept {
    return std::visit(overloaded{
                          [](const FractionalKernel& k) { return k.alpha < 1.0; },
                          [](const GammaKernel& k) { return k.alpha < 1.0; },
                          [](const auto&) { return false; },
                      },
                      variant_);
}

bool Kernel::completely_monotone() const noexcept {
    return !std::holds_alternative<TabulatedKernel>(variant_);
}

bool Kernel::is_constant() const noexcept {
    return std::visit(overloaded{
                          [](const ConstantKernel&) { return true; },
                          [](const FractionalKernel& k) { return k.alpha == 1.0; },
                          [](const ExponentialKernel& k) { return k.rate == 0.0; },
                          [](const GammaKernel& k) { return k.alpha == 1.0 && k.rate == 0.0; },
                          [](const TabulatedKernel&) { return false; },
                      },
                      variant_);
}

std::string Kernel::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const ConstantKernel& k) { os << "constant(k0=" << k.level << ")"; },
                   [&](const FractionalKernel& k) { os << "fractional(alpha=" << k.alpha << ")"; },
                   [&](const ExponentialKernel& k) {
                       os << "exponential(k0=" << k.level << ", rate=" << k.rate << ")";
                   },
                   [&](const GammaKernel& k) { os << "gamma(alpha=" << k.alpha << ", rate=" << k.rate << ")"; },
                   [&](const TabulatedKernel& k) {
                       os << "tabulated(" << k.values.size() << " samples, spacing=" << k.spacing << ")";
                   },
               },
               variant_);
    return os.str();
}

double eval_kernel(const Kernel& k, double t) {
    if (!(t > 0.0) && k.singular_at_zero()) throw DomainError("singular kernel needs t > 0");
    return k(t);
}

std::vector<double> cell_weights(const Kernel& k, const Grid& g) {
    std::vector<double> w(g.steps());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = k.integral(g.node(i), g.node(i + 1));
    return w;
}

double shifted_kernel_derivative(const Kernel& k, double h, double u) {
    if (!(h > 0.0)) throw DomainError("shift h must be positive");
    if (u < 0.0) throw DomainError("shifted kernel derivative needs u >= 0");
    return k.derivative(u + h);
}

}  // namespace affvol
