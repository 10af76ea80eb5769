#include "affvol/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "affvol/convolution.hpp"
#include "affvol/errors.hpp"
#include "affvol/product_weights.hpp"

namespace affvol {
namespace {

void validate_table(const Table& t, const char* what) {
    if (t.times.empty() || t.times.size() != t.values.size()) {
        throw DomainError(std::string(what) + ": table needs matching, nonempty time and value columns");
    }
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        if (!std::isfinite(t.times[i]) || !std::isfinite(t.values[i])) {
            throw DomainError(std::string(what) + ": table entries must be finite");
        }
        if (i > 0 && !(t.times[i] > t.times[i - 1])) {
            throw DomainError(std::string(what) + ": table times must be strictly increasing");
        }
    }
}

}  // namespace

double Table::operator()(double t) const {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const double frac = (t - times[j - 1]) / (times[j] - times[j - 1]);
    return values[j - 1] + frac * (values[j] - values[j - 1]);
}

InputCurve InputCurve::constant_plus_ktheta(double x0, double theta) {
    return constant_plus_ktheta(x0, Table{{0.0}, {theta}});
}

InputCurve InputCurve::constant_plus_ktheta(double x0, Table theta) {
    if (!(x0 >= 0.0) || !std::isfinite(x0)) throw DomainError("g0: x0 must be finite and >= 0");
    validate_table(theta, "g0 theta");
    for (double v : theta.values) {
        if (v < 0.0) throw DomainError("g0: theta must be nonnegative");
    }
    return InputCurve(ConstantPlusKTheta{x0, std::move(theta)});
}

InputCurve InputCurve::monotone_table(Table curve) {
    validate_table(curve, "g0 monotone table");
    if (curve.times.front() != 0.0 || curve.values.front() != 0.0) {
        throw DomainError("g0 monotone table must start at (0, 0)");
    }
    for (std::size_t i = 1; i < curve.values.size(); ++i) {
        if (curve.values[i] < curve.values[i - 1]) throw DomainError("g0 monotone table must be nondecreasing");
    }
    return InputCurve(MonotoneTable{std::move(curve)});
}

std::vector<double> InputCurve::sample(const Kernel& k, const Grid& g) const {
    std::vector<double> out(g.size());
    if (const auto* m = std::get_if<MonotoneTable>(&variant_)) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = m->curve(g.node(i));
        return out;
    }
    const auto& ck = std::get<ConstantPlusKTheta>(variant_);
    std::vector<double> theta(g.size());
    bool zero = true;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] = ck.theta(g.node(i));
        zero = zero && theta[i] == 0.0;
    }
    if (zero) {
        std::fill(out.begin(), out.end(), ck.x0);
        return out;
    }
    const ProductWeights pw(k, g);
    const auto conv = convolve<double>(pw, theta);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ck.x0 + conv[i];
    return out;
}

bool InputCurve::is_constant() const {
    if (const auto* m = std::get_if<MonotoneTable>(&variant_)) {
        return std::all_of(m->curve.values.begin(), m->curve.values.end(), [](double v) { return v == 0.0; });
    }
    const auto& ck = std::get<ConstantPlusKTheta>(variant_);
    return std::all_of(ck.theta.values.begin(), ck.theta.values.end(), [](double v) { return v == 0.0; });
}

std::string InputCurve::describe() const {
    std::ostringstream os;
    if (const auto* m = std::get_if<MonotoneTable>(&variant_)) {
        os << "monotone_table(" << m->curve.times.size() << " knots)";
    } else {
        const auto& ck = std::get<ConstantPlusKTheta>(variant_);
        os << "x0 + K*theta(x0=" << ck.x0 << ", theta knots=" << ck.theta.times.size() << ")";
    }
    return os.str();
}

void ModelSpec::validate() const {
    if (!std::isfinite(b)) throw DomainError("model: b must be finite");
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("model: c must be finite and >= 0");
    if (!std::isfinite(b0)) throw DomainError("model: b0 must be finite");
    if (!(a0 >= 0.0) || !std::isfinite(a0)) throw DomainError("model: a0 must be finite and >= 0");
}

TestFunction::TestFunction(std::vector<std::complex<double>> s, const Grid& g) : samples_(std::move(s)), grid_(g) {
    if (samples_.size() != g.size()) throw ContractError("test function: sample count must match grid");
    for (const auto& z : samples_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("test function must be finite");
        if (z.real() > 0.0) throw DomainError("test function must satisfy Re f <= 0");
    }
}

TestFunction TestFunction::zero(const Grid& g) { return TestFunction(std::vector<std::complex<double>>(g.size()), g); }

TestFunction TestFunction::imag_const(double u, const Grid& g) {
    return TestFunction(std::vector<std::complex<double>>(g.size(), {0.0, u}), g);
}

TestFunction TestFunction::complex_const(std::complex<double> w, const Grid& g) {
    return TestFunction(std::vector<std::complex<double>>(g.size(), w), g);
}

TestFunction TestFunction::from_samples(std::vector<std::complex<double>> samples, const Grid& g) {
    return TestFunction(std::move(samples), g);
}

TestFunction TestFunction::from_table(const Table& re, const Table& im, const Grid& g) {
    validate_table(re, "f real part");
    validate_table(im, "f imaginary part");
    std::vector<std::complex<double>> s(g.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = {re(g.node(i)), im(g.node(i))};
    return TestFunction(std::move(s), g);
}

std::vector<double> TestFunction::real_part() const {
    std::vector<double> out(samples_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples_[i].real();
    return out;
}

bool TestFunction::is_real() const {
    return std::all_of(samples_.begin(), samples_.end(), [](const auto& z) { return z.imag() == 0.0; });
}

bool TestFunction::is_constant() const {
    return std::all_of(samples_.begin(), samples_.end(), [&](const auto& z) { return z == samples_.front(); });
}

bool TestFunction::is_zero() const {
    return std::all_of(samples_.begin(), samples_.end(), [](const auto& z) { return z == 0.0; });
}

}  // namespace affvol
