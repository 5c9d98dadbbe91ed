#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tvcmoga/errors.hpp"
#include "tvcmoga/fuzzy.hpp"
#include "tvcmoga/objective.hpp"
#include "tvcmoga/plant.hpp"

namespace tvc {

// Closed-loop rollout of plant + fuzzy-PID controller and the evaluation of
// the two objective integrals.

struct FuzzyControllerConfig {
    std::array<SifieRuleSet, 3> sifie{default_sifie(), default_sifie(),
                                      default_sifie()};
    PfieRuleSet pfie = default_pfie(0.2);
    std::array<double, 3> input_scales{1.0, 0.2, 1.0}; // integral, theta, rate
    double integral_clamp = 20.0;                      // anti-windup [rad s]
    std::array<double, 3> static_importance{1.0, 1.0, 1.0}; // w_i (diagnostic)
    std::array<double, 3> regulation_coeff{0.0, 0.0, 0.0};  // B_i (diagnostic)

    void validate() const {
        for (int i = 0; i < 3; ++i)
            sifie[i].validate("controller.sifie");
        pfie.validate("controller.pfie");
        for (double s : input_scales)
            if (!(s > 0.0))
                throw InvalidParameter("controller.input_scales must be > 0");
        if (!(integral_clamp >= 0.0))
            throw InvalidParameter("controller.integral_clamp must be >= 0");
    }
};

struct SimConfig {
    double theta0 = 0.2;     // initial pitch deviation [rad]
    double theta_dot0 = 0.0; // initial pitch rate [rad/s]
    double horizon = 10.0;   // simulation duration T [s]
    double dt = 0.01;        // integrator step [s]
    PlantParams plant = default_plant();
    double phi_max = 0.26; // gimbal saturation [rad], ~15 deg
    FuzzyControllerConfig controller;
    double divergence_limit = 1e3; // |theta| beyond this flags divergence [rad]
    double penalty = 1e6;          // objective value assigned to divergent rollouts

    // Number of integrator steps; horizon must be an integer multiple of dt
    // to within half a step.
    long steps() const { return std::lround(horizon / dt); }

    void validate() const {
        if (!(horizon > 0.0))
            throw InvalidParameter("sim.horizon must be > 0");
        if (!(dt > 0.0) || !(dt <= horizon))
            throw InvalidParameter("sim.dt must satisfy 0 < dt <= horizon");
        long n = steps();
        if (n < 1 || std::abs(static_cast<double>(n) * dt - horizon) > 0.5 * dt)
            throw InvalidParameter("sim.dt must divide sim.horizon");
        if (!std::isfinite(tvc::derive_b(plant.m, plant.l, plant.inertia,
                                         plant.a, plant.g)))
            throw InvalidParameter("sim.plant produces non-finite b");
        tvc::validate(plant);
        if (!(phi_max > 0.0))
            throw InvalidParameter("actuator.phi_max must be > 0");
        controller.validate();
        if (!(divergence_limit > 0.0))
            throw InvalidParameter("sim.divergence_limit must be > 0");
        if (!(penalty > 0.0))
            throw InvalidParameter("sim.penalty must be > 0");
        if (!std::isfinite(theta0) || !std::isfinite(theta_dot0))
            throw NumericError("sim initial state must be finite");
    }
};

// Controller defaults that depend on the scenario: theta scale and the PFIE
// universe track |theta0|, the anti-windup clamp tracks 10*|theta0|*T.
inline FuzzyControllerConfig default_controller_config(double theta0,
                                                       double horizon) {
    double theta_ref = std::abs(theta0) > 0.0 ? std::abs(theta0) : 1.0;
    FuzzyControllerConfig c;
    c.pfie = default_pfie(theta_ref);
    c.input_scales = {1.0, theta_ref, 1.0};
    c.integral_clamp = std::max(10.0 * std::abs(theta0) * horizon, 1.0);
    return c;
}

inline SimConfig default_sim_config() {
    SimConfig cfg;
    cfg.controller = default_controller_config(cfg.theta0, cfg.horizon);
    return cfg;
}

struct TrajectorySample {
    double t;         // [s]
    double theta;     // [rad]
    double theta_dot; // [rad/s]
    double phi;       // applied gimbal angle [rad], |phi| <= phi_max
    double u_t;       // applied control parameter, tan(phi)
    double delta_w;   // PFIE output
    std::array<double, 3> gains; // scheduled K_i, K_p, K_d
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool diverged = false;
    // Per-sample dynamic importance degrees w^D, one triple per sample.
    // Diagnostic log only; not serialized to CSV.
    std::vector<std::array<double, 3>> importance;
};

// Deterministic closed-loop rollout. The controller runs at the integrator
// rate; u_t is held constant across each RK4 step. A |theta| excursion past
// divergence_limit (or a non-finite state) flags and truncates the trajectory.
inline Trajectory rollout(const GainSchedule& g, const SimConfig& cfg) {
    cfg.validate();
    const long n = cfg.steps();
    Trajectory traj;
    traj.samples.reserve(static_cast<size_t>(n) + 1);
    traj.importance.reserve(static_cast<size_t>(n) + 1);

    State s{cfg.theta0, cfg.theta_dot0};
    ControllerState cs = make_controller_state(
        cfg.theta0, cfg.controller.input_scales, cfg.controller.integral_clamp);

    for (long k = 0; k <= n; ++k) {
        if (!std::isfinite(s.theta) || !std::isfinite(s.theta_dot) ||
            std::abs(s.theta) > cfg.divergence_limit) {
            traj.diverged = true;
            break;
        }
        ControlEval eval = control_action(cs, s.theta, s.theta_dot, g,
                                          cfg.controller.sifie,
                                          cfg.controller.pfie);
        ActuatorCommand cmd = saturate_command(eval.u, cfg.phi_max);
        traj.samples.push_back(TrajectorySample{
            static_cast<double>(k) * cfg.dt, s.theta, s.theta_dot, cmd.phi,
            cmd.u_t, eval.delta_w, eval.gains});
        traj.importance.push_back(
            {dynamic_importance(cfg.controller.static_importance[0],
                                cfg.controller.regulation_coeff[0], eval.delta_w),
             dynamic_importance(cfg.controller.static_importance[1],
                                cfg.controller.regulation_coeff[1], eval.delta_w),
             dynamic_importance(cfg.controller.static_importance[2],
                                cfg.controller.regulation_coeff[2], eval.delta_w)});
        if (k < n) {
            s = rk4_step(s, cmd, cfg.plant.b, cfg.dt);
            cs = integrate_error(cs, s.theta, cfg.dt);
        }
    }
    return traj;
}

// Trapezoidal integrals of |theta(t)| and |phi(t)| over the sampled horizon.
inline ObjectivePair objectives(const Trajectory& traj) {
    if (traj.samples.empty())
        throw InvalidInput("objectives: empty trajectory");
    if (traj.diverged)
        throw InvalidInput("objectives: divergence-flagged trajectory");
    double of1 = 0.0;
    double of2 = 0.0;
    for (size_t i = 1; i < traj.samples.size(); ++i) {
        const TrajectorySample& a = traj.samples[i - 1];
        const TrajectorySample& b = traj.samples[i];
        double h = b.t - a.t;
        of1 += 0.5 * h * (std::abs(a.theta) + std::abs(b.theta));
        of2 += 0.5 * h * (std::abs(a.phi) + std::abs(b.phi));
    }
    return ObjectivePair{of1, of2};
}

// Pure fitness of a gain schedule: objectives of its rollout, or the
// configured penalty pair when the rollout diverges.
inline ObjectivePair evaluate(const GainSchedule& g, const SimConfig& cfg) {
    Trajectory traj = rollout(g, cfg);
    if (traj.diverged)
        return ObjectivePair{cfg.penalty, cfg.penalty};
    return objectives(traj);
}

// Time after which |theta| stays within band*|theta0|; horizon end if never.
// Reported per trajectory, never used as an optimization constraint.
inline double settling_time(const Trajectory& traj, double band = 0.02) {
    if (traj.samples.empty())
        throw InvalidInput("settling_time: empty trajectory");
    double bound = band * std::abs(traj.samples.front().theta);
    double t_settle = traj.samples.back().t;
    for (size_t i = traj.samples.size(); i-- > 0;) {
        if (std::abs(traj.samples[i].theta) > bound)
            return i + 1 < traj.samples.size() ? traj.samples[i + 1].t : t_settle;
    }
    return traj.samples.front().t;
}

// Peak excursion past equilibrium on the far side of theta0, as a fraction
// of |theta0|. Zero when the response never crosses zero.
inline double overshoot(const Trajectory& traj) {
    if (traj.samples.empty())
        throw InvalidInput("overshoot: empty trajectory");
    double theta0 = traj.samples.front().theta;
    if (theta0 == 0.0)
        return 0.0;
    double sign = theta0 > 0.0 ? 1.0 : -1.0;
    double worst = 0.0;
    for (const TrajectorySample& s : traj.samples)
        worst = std::max(worst, -sign * s.theta);
    return worst / std::abs(theta0);
}

} // namespace tvc
