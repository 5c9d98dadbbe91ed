#pragma once

namespace tvc {

// The two minimization objectives: OF1 = integral of |theta| dt, the system's
// deviation from equilibrium, and OF2 = integral of |phi| dt, the thrust
// vector's deviation. Units rad*s.
struct ObjectivePair {
    double of1 = 0.0;
    double of2 = 0.0;
};

} // namespace tvc
