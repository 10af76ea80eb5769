#pragma once

#include <cstddef>
#include <vector>

namespace affvol {

// Uniform grid t_i = i * step on [0, horizon]; node(steps()) is exactly horizon.
class Grid {
public:
    Grid(double horizon, std::size_t steps);

    double horizon() const noexcept { return horizon_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_ + 1; }
    double step() const noexcept { return step_; }

    double node(std::size_t i) const;
    std::vector<double> nodes() const;

    // Index of the node equal to t (up to rounding); ContractError otherwise.
    std::size_t index_of(double t) const;
    // Nearest node to t in [0, horizon].
    std::size_t nearest(double t) const;

    bool operator==(const Grid& other) const noexcept {
        return horizon_ == other.horizon_ && steps_ == other.steps_;
    }

private:
    double horizon_;
    std::size_t steps_;
    double step_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace affvol
