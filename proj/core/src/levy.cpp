#include "affvol/levy.hpp"

#include <cmath>
#include <sstream>

namespace affvol {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kRealPartSlack = 1e-12;

template <class T>
T series_expm1_minus_z(T z) {
    T term = z * z / 2.0;
    T sum = term;
    for (int k = 3; k < 20; ++k) {
        term *= z / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

}  // namespace

std::complex<double> expm1_minus_z(std::complex<double> z) {
    if (std::abs(z) < 0.1) return series_expm1_minus_z(z);
    return std::exp(z) - 1.0 - z;
}

double expm1_minus_z(double x) {
    if (std::abs(x) < 0.1) return series_expm1_minus_z(x);
    return std::expm1(x) - x;
}

LevyMeasure LevyMeasure::none() { return LevyMeasure(PointMassJumps{0.0, 1.0}); }

LevyMeasure LevyMeasure::exponential(double intensity, double rate) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) throw DomainError("jump intensity must be >= 0");
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("exponential jump rate must be > 0");
    return LevyMeasure(ExponentialJumps{intensity, rate});
}

LevyMeasure LevyMeasure::point_mass(double intensity, double size) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) throw DomainError("jump intensity must be >= 0");
    if (!(size > 0.0) || !std::isfinite(size)) throw DomainError("point-mass jump size must be > 0");
    return LevyMeasure(PointMassJumps{intensity, size});
}

LevyMeasure LevyMeasure::tabulated(std::vector<double> nodes, std::vector<double> weights) {
    if (nodes.size() != weights.size()) throw DomainError("jump table needs as many weights as nodes");
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (!(nodes[j] > 0.0) || !std::isfinite(nodes[j])) throw DomainError("jump table nodes must be > 0");
        if (!(weights[j] >= 0.0) || !std::isfinite(weights[j])) throw DomainError("jump table weights must be >= 0");
    }
    return LevyMeasure(TabulatedJumps{std::move(nodes), std::move(weights)});
}

std::complex<double> LevyMeasure::transform(std::complex<double> u) const {
    if (u.real() > kRealPartSlack) throw DomainError("jump transform needs Re u <= 0");
    return std::visit(overloaded{
                          [u](const ExponentialJumps& e) -> std::complex<double> {
                              return e.intensity * u * u / (e.rate * (e.rate - u));
                          },
                          [u](const PointMassJumps& p) -> std::complex<double> {
                              return p.intensity * expm1_minus_z(u * p.size);
                          },
                          [u](const TabulatedJumps& t) {
                              std::complex<double> sum = 0.0;
                              for (std::size_t j = 0; j < t.nodes.size(); ++j) {
                                  sum += t.weights[j] * expm1_minus_z(u * t.nodes[j]);
                              }
                              return sum;
                          },
                      },
                      variant_);
}

double LevyMeasure::transform(double u) const {
    if (u > kRealPartSlack) throw DomainError("jump transform needs u <= 0");
    return std::visit(overloaded{
                          [u](const ExponentialJumps& e) { return e.intensity * u * u / (e.rate * (e.rate - u)); },
                          [u](const PointMassJumps& p) { return p.intensity * expm1_minus_z(u * p.size); },
                          [u](const TabulatedJumps& t) {
                              double sum = 0.0;
                              for (std::size_t j = 0; j < t.nodes.size(); ++j) {
                                  sum += t.weights[j] * expm1_minus_z(u * t.nodes[j]);
                              }
                              return sum;
                          },
                      },
                      variant_);
}

double LevyMeasure::total_mass() const {
    return std::visit(overloaded{
                          [](const ExponentialJumps& e) { return e.intensity; },
                          [](const PointMassJumps& p) { return p.intensity; },
                          [](const TabulatedJumps& t) {
                              double s = 0.0;
                              for (double w : t.weights) s += w;
                              return s;
                          },
                      },
                      variant_);
}

double LevyMeasure::first_moment() const {
    return std::visit(overloaded{
                          [](const ExponentialJumps& e) { return e.intensity / e.rate; },
                          [](const PointMassJumps& p) { return p.intensity * p.size; },
                          [](const TabulatedJumps& t) {
                              double s = 0.0;
                              for (std::size_t j = 0; j < t.nodes.size(); ++j) s += t.weights[j] * t.nodes[j];
                              return s;
                          },
                      },
                      variant_);
}

double LevyMeasure::mean_size() const {
    const double mass = total_mass();
    return mass > 0.0 ? first_moment() / mass : 0.0;
}

double LevyMeasure::second_moment() const {
    return std::visit(overloaded{
                          [](const ExponentialJumps& e) { return 2.0 * e.intensity / (e.rate * e.rate); },
                          [](const PointMassJumps& p) { return p.intensity * p.size * p.size; },
                          [](const TabulatedJumps& t) {
                              double s = 0.0;
                              for (std::size_t j = 0; j < t.nodes.size(); ++j) {
                                  s += t.weights[j] * t.nodes[j] * t.nodes[j];
                              }
                              return s;
                          },
                      },
                      variant_);
}

std::string LevyMeasure::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const ExponentialJumps& e) {
                       os << "exponential(lambda=" << e.intensity << ", beta=" << e.rate << ")";
                   },
                   [&](const PointMassJumps& p) {
                       os << "point_mass(lambda=" << p.intensity << ", size=" << p.size << ")";
                   },
                   [&](const TabulatedJumps& t) { os << "tabulated(" << t.nodes.size() << " nodes)"; },
               },
               variant_);
    return os.str();
}

std::complex<double> jump_transform(const LevyMeasure& nu, std::complex<double> u) { return nu.transform(u); }

double second_moment(const LevyMeasure& nu) { return nu.second_moment(); }

}  // namespace affvol
