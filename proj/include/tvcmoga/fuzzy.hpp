#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "tvcmoga/errors.hpp"

namespace tvc {

// Two-engine fuzzy machinery: per-channel single-input inference (SIFIE)
// mapping a normalized signal to [-1, 1], and the preferential engine (PFIE)
// mapping |theta| to the gain-regulation scalar delta_w.

struct TriangleShape {
    double left;  // left foot, membership 0
    double peak;  // membership 1
    double right; // right foot, membership 0
};

// Three ordered linguistic terms over one universe. The outer shapes shoulder
// outward: membership stays 1 beyond the outer peaks, so inputs past the
// universe edge saturate instead of losing coverage.
struct MembershipTriple {
    std::array<std::string, 3> labels{"NB", "Z", "PB"};
    std::array<TriangleShape, 3> shapes{
        TriangleShape{-2.0, -1.0, 0.0},
        TriangleShape{-1.0, 0.0, 1.0},
        TriangleShape{0.0, 1.0, 2.0},
    };
    double lo = -1.0; // universe lower edge
    double hi = 1.0;  // universe upper edge

    std::array<double, 3> memberships(double x) const {
        return {shoulder_left(shapes[0], x), triangle(shapes[1], x),
                shoulder_right(shapes[2], x)};
    }

    // Peaks strictly increasing, shapes non-degenerate, and adjacent shapes
    // strictly overlapping so the defuzzification denominator never vanishes.
    void validate(const char* who) const {
        if (!(lo < hi))
            throw InvalidParameter(std::string(who) + ": universe lo must be < hi");
        for (const TriangleShape& t : shapes)
            if (!(t.left < t.peak && t.peak < t.right))
                throw InvalidParameter(std::string(who) +
                                       ": shape feet must straddle its peak");
        if (!(shapes[0].peak < shapes[1].peak && shapes[1].peak < shapes[2].peak))
            throw InvalidParameter(std::string(who) + ": peaks must be strictly increasing");
        if (!(shapes[1].left < shapes[0].right) || !(shapes[2].left < shapes[1].right))
            throw InvalidParameter(std::string(who) +
                                   ": adjacent shapes must overlap (coverage gap)");
    }

private:
    static double triangle(const TriangleShape& t, double x) {
        if (x <= t.left || x >= t.right)
            return 0.0;
        if (x <= t.peak)
            return (x - t.left) / (t.peak - t.left);
        return (t.right - x) / (t.right - t.peak);
    }

    static double shoulder_left(const TriangleShape& t, double x) {
        if (x <= t.peak)
            return 1.0;
        if (x >= t.right)
            return 0.0;
        return (t.right - x) / (t.right - t.peak);
    }

    static double shoulder_right(const TriangleShape& t, double x) {
        if (x >= t.peak)
            return 1.0;
        if (x <= t.left)
            return 0.0;
        return (x - t.left) / (t.peak - t.left);
    }
};

// SIFIE rule base: NB -> 1, Z -> 0, PB -> -1. Consequents are fixed.
struct SifieRuleSet {
    MembershipTriple memberships;
    std::array<double, 3> consequents{1.0, 0.0, -1.0};

    void validate(const char* who = "sifie") const {
        memberships.validate(who);
        if (consequents != std::array<double, 3>{1.0, 0.0, -1.0})
            throw InvalidParameter(std::string(who) +
                                   ": consequents are fixed to (1, 0, -1)");
    }
};

// PFIE rule base over |theta|: DS -> 1, DM -> 0.5, DL -> 1. The non-monotone
// consequent triple is deliberate: priority rises again for large deviations.
struct PfieRuleSet {
    MembershipTriple memberships;
    std::array<double, 3> consequents{1.0, 0.5, 1.0};

    void validate(const char* who = "pfie") const {
        memberships.validate(who);
        if (consequents != std::array<double, 3>{1.0, 0.5, 1.0})
            throw InvalidParameter(std::string(who) +
                                   ": consequents are fixed to (1, 0.5, 1)");
    }
};

// Symmetric default over [-1, 1]: peaks at -1, 0, 1, outer shapes shouldered.
inline SifieRuleSet default_sifie() { return SifieRuleSet{}; }

// Default PFIE over [0, theta_ref] with peaks at 0, theta_ref/2, theta_ref.
inline PfieRuleSet default_pfie(double theta_ref) {
    if (!(theta_ref > 0.0))
        throw InvalidParameter("pfie.theta_ref must be > 0");
    double h = 0.5 * theta_ref;
    PfieRuleSet r;
    r.memberships.labels = {"DS", "DM", "DL"};
    r.memberships.shapes = {TriangleShape{-h, 0.0, h},
                            TriangleShape{0.0, h, theta_ref},
                            TriangleShape{h, theta_ref, theta_ref + h}};
    r.memberships.lo = 0.0;
    r.memberships.hi = theta_ref;
    return r;
}

// Weighted-average defuzzification of one SIFIE channel.
// f = (NB*1 + Z*0 + PB*(-1)) / (NB + Z + PB), in [-1, 1].
inline double sifie_output(double x, const SifieRuleSet& rules) {
    auto mu = rules.memberships.memberships(x);
    double den = mu[0] + mu[1] + mu[2];
    if (!(den > 0.0))
        throw CoverageError("sifie_output: no rule fires (denominator 0)");
    return (mu[0] * rules.consequents[0] + mu[1] * rules.consequents[1] +
            mu[2] * rules.consequents[2]) /
           den;
}

// delta_w = (w1*DS + w2*DM + w3*DL) / (DS + DM + DL); one scalar shared by
// all three channels.
inline double pfie_delta_w(double theta_abs, const PfieRuleSet& rules) {
    if (!(theta_abs >= 0.0))
        throw InvalidParameter("pfie_delta_w: theta_abs must be >= 0");
    auto mu = rules.memberships.memberships(theta_abs);
    double den = mu[0] + mu[1] + mu[2];
    if (!(den > 0.0))
        throw CoverageError("pfie_delta_w: no rule fires (denominator 0)");
    return (mu[0] * rules.consequents[0] + mu[1] * rules.consequents[1] +
            mu[2] * rules.consequents[2]) /
           den;
}

// Dynamic importance degree w^D = w + B * delta_w. Diagnostic only: nothing
// downstream consumes it, the gain schedule takes delta_w directly.
inline double dynamic_importance(double w, double regulation_coeff,
                                 double delta_w) {
    if (!std::isfinite(w) || !std::isfinite(regulation_coeff) ||
        !std::isfinite(delta_w))
        throw NumericError("dynamic_importance: non-finite input");
    return w + regulation_coeff * delta_w;
}

struct DynamicImportance {
    double w = 1.0;                // static importance
    double regulation_coeff = 0.0; // B
    double delta_w = 0.0;          // PFIE output
    double w_dynamic = 1.0;        // w + B * delta_w
};

// Six design variables: base and regulation gains, order (K_i, K_p, K_d).
struct GainSchedule {
    std::array<double, 3> base{0.0, 0.0, 0.0};
    std::array<double, 3> regulation{0.0, 0.0, 0.0};
};

// Scheduled gains K_hat = base + regulation * delta_w, componentwise.
inline std::array<double, 3> schedule_gains(const GainSchedule& g,
                                            double delta_w) {
    if (!std::isfinite(delta_w))
        throw NumericError("schedule_gains: non-finite delta_w");
    return {g.base[0] + g.regulation[0] * delta_w,
            g.base[1] + g.regulation[1] * delta_w,
            g.base[2] + g.regulation[2] * delta_w};
}

// Mutable controller memory: the error integral plus the trapezoid's previous
// sample. input_scales normalize (integral, theta, theta_dot) onto the SIFIE
// universe.
struct ControllerState {
    double integral = 0.0;   // accumulated integral of theta [rad s]
    double prev_theta = 0.0; // previous theta sample for the trapezoid rule
    std::array<double, 3> input_scales{1.0, 0.2, 1.0};
    double integral_clamp = 20.0; // anti-windup bound [rad s]
};

inline ControllerState make_controller_state(double theta0,
                                             std::array<double, 3> scales,
                                             double clamp) {
    ControllerState cs;
    cs.integral = 0.0;
    cs.prev_theta = theta0;
    cs.input_scales = scales;
    cs.integral_clamp = clamp;
    return cs;
}

// Trapezoidal accumulation of theta into the integral, clamped to the
// anti-windup bound.
inline ControllerState integrate_error(const ControllerState& cs, double theta,
                                       double dt) {
    if (!(dt > 0.0))
        throw InvalidParameter("integrate_error: dt must be > 0");
    ControllerState out = cs;
    out.integral = std::clamp(cs.integral + 0.5 * dt * (cs.prev_theta + theta),
                              -cs.integral_clamp, cs.integral_clamp);
    out.prev_theta = theta;
    return out;
}

struct ControlEval {
    double u = 0.0;       // control output, pre-saturation u_t
    double delta_w = 0.0; // PFIE output at |theta|
    std::array<double, 3> gains{0.0, 0.0, 0.0}; // scheduled K_i, K_p, K_d
};

// Full fuzzy-PID action: normalize each channel, defuzzify it through its own
// SIFIE, schedule the gains with the PFIE output, and combine.
inline ControlEval control_action(const ControllerState& cs, double theta,
                                  double theta_dot, const GainSchedule& g,
                                  const std::array<SifieRuleSet, 3>& sifie,
                                  const PfieRuleSet& pfie) {
    for (double s : cs.input_scales)
        if (!(s > 0.0))
            throw InvalidParameter("controller.input_scales must be > 0");
    double f_int = sifie_output(cs.integral / cs.input_scales[0], sifie[0]);
    double f_theta = sifie_output(theta / cs.input_scales[1], sifie[1]);
    double f_rate = sifie_output(theta_dot / cs.input_scales[2], sifie[2]);
    ControlEval out;
    out.delta_w = pfie_delta_w(std::abs(theta), pfie);
    out.gains = schedule_gains(g, out.delta_w);
    out.u = out.gains[0] * f_int + out.gains[1] * f_theta + out.gains[2] * f_rate;
    return out;
}

} // namespace tvc
