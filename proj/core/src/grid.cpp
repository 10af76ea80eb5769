#include "affvol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "affvol/errors.hpp"

namespace affvol {

Grid::Grid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("grid horizon must be positive and finite");
    }
    if (steps < 2) throw DomainError("grid needs at least two steps");
    step_ = horizon / static_cast<double>(steps);
}

double Grid::node(std::size_t i) const {
    if (i > steps_) throw ContractError("grid node index out of range");
    if (i == steps_) return horizon_;
    return static_cast<double>(i) * step_;
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
    return out;
}

std::size_t Grid::nearest(double t) const {
    if (!(t >= -1e-12 * horizon_ && t <= horizon_ * (1.0 + 1e-12))) {
        throw ContractError("time " + std::to_string(t) + " outside [0, T]");
    }
    const double x = std::round(t / step_);
    return static_cast<std::size_t>(std::min(std::max(x, 0.0), static_cast<double>(steps_)));
}

std::size_t Grid::index_of(double t) const {
    const std::size_t i = nearest(t);
    if (std::abs(node(i) - t) > 1e-9 * step_) {
        throw ContractError("time " + std::to_string(t) + " is not a grid node");
    }
    return i;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) throw ContractError(std::string(where) + ": grid mismatch");
}

}  // namespace affvol
