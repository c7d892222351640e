#pragma once

#include "mechent/dynamics.hpp"
#include "mechent/gaussian.hpp"

namespace mechent {

struct WignerSnapshot {
    double t = 0;
    Mode mode = Mode::Minus;
    SingleModeState state; // covariance and (separately recorded) classical mean
    Matrix6 covariance = Matrix6::Zero();
    ClassicalMeanState mean;
    WignerField field;
};

/// Integrates to time t and evaluates the Wigner function of one normal mode.
/// Throws DivergenceError if the covariance diverges before t.
WignerSnapshot wigner_snapshot(const SystemParams& p, double t, Mode mode,
                               const WignerGrid& grid = {}, const IntegratorOptions& opts = {});

} // namespace mechent
