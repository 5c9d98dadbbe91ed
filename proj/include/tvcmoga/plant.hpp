#pragma once

#include <cmath>

#include "tvcmoga/errors.hpp"

namespace tvc {

// Pitch-channel rigid-body model of the carrier. The vehicle climbs with
// commanded vertical acceleration a while the gimbal angle phi steers the
// pitch deviation theta; the whole channel reduces to a double integrator
// theta_dd = b * u_t with u_t = tan(phi).

struct PlantParams {
    double m = 50.0;       // vehicle mass [kg]
    double l = 2.0;        // vehicle length [m]
    double inertia = 60.0; // pitch moment of inertia [kg m^2]
    double a = 20.0;       // commanded vertical acceleration [m/s^2]
    double g = 9.81;       // gravitational acceleration [m/s^2]
    double b = 0.0;        // control effectiveness [1/s^2], always < 0; see derive_b
};

// Control effectiveness of the gimbal: b = -m*l*(a+g) / (2*I).
// Negative for any physical parameter set.
inline double derive_b(double m, double l, double inertia, double a, double g) {
    if (!(m > 0.0))
        throw InvalidParameter("plant.m must be > 0");
    if (!(l > 0.0))
        throw InvalidParameter("plant.l must be > 0");
    if (!(inertia > 0.0))
        throw InvalidParameter("plant.inertia must be > 0");
    if (!(a + g > 0.0))
        throw InvalidParameter("plant: a + g must be > 0");
    return -m * l * (a + g) / (2.0 * inertia);
}

inline PlantParams make_plant(double m, double l, double inertia, double a,
                              double g = 9.81) {
    PlantParams p{m, l, inertia, a, g, 0.0};
    p.b = derive_b(m, l, inertia, a, g);
    return p;
}

inline PlantParams default_plant() { return make_plant(50.0, 2.0, 60.0, 20.0); }

// Checks the stored b against its defining formula (1e-12 relative).
inline void validate(const PlantParams& p) {
    double expect = derive_b(p.m, p.l, p.inertia, p.a, p.g);
    if (std::abs(p.b - expect) > 1e-12 * std::abs(expect))
        throw InvalidParameter("plant.b inconsistent with m, l, inertia, a, g");
}

struct State {
    double theta = 0.0;     // pitch deviation [rad]
    double theta_dot = 0.0; // pitch rate [rad/s]
};

struct StateRate {
    double theta_dot;  // [rad/s]
    double theta_ddot; // [rad/s^2]
};

struct ActuatorCommand {
    double u_t = 0.0;      // control parameter, equals tan(phi)
    double phi = 0.0;      // gimbal angle [rad]
    double phi_max = 0.26; // saturation bound [rad]
};

// Map a raw controller output u (interpreted as tan(phi) before saturation)
// to a feasible command: phi = atan(u) clamped to +-phi_max, u_t = tan(phi).
inline ActuatorCommand saturate_command(double u, double phi_max) {
    if (!(phi_max > 0.0))
        throw InvalidParameter("actuator.phi_max must be > 0");
    if (std::isnan(u))
        throw NumericError("saturate_command: u is NaN");
    double phi = std::atan(u);
    if (phi > phi_max)
        phi = phi_max;
    else if (phi < -phi_max)
        phi = -phi_max;
    return ActuatorCommand{std::tan(phi), phi, phi_max};
}

inline StateRate state_derivative(const State& s, const ActuatorCommand& cmd,
                                  double b) {
    if (!std::isfinite(s.theta) || !std::isfinite(s.theta_dot) ||
        !std::isfinite(cmd.u_t) || !std::isfinite(b))
        throw NumericError("state_derivative: non-finite input");
    return StateRate{s.theta_dot, b * cmd.u_t};
}

// Thrust magnitude satisfying the vertical force balance -mg + F_t cos(theta) = ma
// with F_t = F cos(phi). Positive magnitude; singular as either cosine vanishes.
inline double thrust_magnitude(const PlantParams& p, double phi, double theta) {
    constexpr double cos_tol = 1e-9;
    double cp = std::cos(phi);
    double ct = std::cos(theta);
    if (cp <= cos_tol || ct <= cos_tol)
        throw SingularityError("thrust_magnitude: cos(phi) or cos(theta) ~ 0");
    return p.m * (p.a + p.g) / (cp * ct);
}

// Classical RK4 step with u_t held constant (zero-order hold). Exact for this
// plant up to roundoff: the right-hand side is polynomial of degree <= 1 in t.
inline State rk4_step(const State& s, const ActuatorCommand& cmd, double b,
                      double dt) {
    if (!(dt > 0.0))
        throw InvalidParameter("rk4_step: dt must be > 0");
    auto f = [&](const State& x) { return state_derivative(x, cmd, b); };
    StateRate k1 = f(s);
    StateRate k2 = f(State{s.theta + 0.5 * dt * k1.theta_dot,
                           s.theta_dot + 0.5 * dt * k1.theta_ddot});
    StateRate k3 = f(State{s.theta + 0.5 * dt * k2.theta_dot,
                           s.theta_dot + 0.5 * dt * k2.theta_ddot});
    StateRate k4 =
        f(State{s.theta + dt * k3.theta_dot, s.theta_dot + dt * k3.theta_ddot});
    State out;
    out.theta = s.theta + dt / 6.0 *
                              (k1.theta_dot + 2.0 * k2.theta_dot +
                               2.0 * k3.theta_dot + k4.theta_dot);
    out.theta_dot = s.theta_dot + dt / 6.0 *
                                      (k1.theta_ddot + 2.0 * k2.theta_ddot +
                                       2.0 * k3.theta_ddot + k4.theta_ddot);
    return out;
}

} // namespace tvc
