#pragma once

#include "affvol/model.hpp"

namespace affvol::testing {

// Fractional model used throughout the acceptance run.
inline ModelSpec acceptance_model() {
    return ModelSpec{Kernel::fractional(0.6), -0.3, 0.09, LevyMeasure::exponential(0.5, 10.0),
                     InputCurve::constant_plus_ktheta(0.3, 0.1)};
}

inline ModelSpec classical_model(double b, double c, LevyMeasure jumps, double x0 = 0.3) {
    return ModelSpec{Kernel::constant(1.0), b, c, std::move(jumps), InputCurve::constant_plus_ktheta(x0, 0.0)};
}

}  // namespace affvol::testing
