#pragma once

// Transcritical bifurcation dynamics of the free-flow <-> saturation
// transition. State is the throughput deficit x = B - T, which obeys the
// normal form dx/dt = r*x - x^2 with r = B*(1 - p/p_c). For p > p_c the
// deficit decays to 0 (throughput at bandwidth); for p < p_c it settles
// at x = r (throughput on the saturated branch). The time unit is
// arbitrary: the underlying measurements carry no transient timescale.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace linksat {

enum class Stability { stable, unstable, degenerate };

struct FixedPoint {
    double t_value_bps;
    Stability stability;
    bool virtual_branch;   // fixed point above bandwidth, not physically reachable
};

inline double normal_form_rate(double bandwidth_bps, double packet_bytes, double p_c_bytes) {
    if (!(bandwidth_bps > 0) || !(packet_bytes > 0) || !(p_c_bytes > 0))
        throw std::invalid_argument("bandwidth, packet size, and p_c must be positive");
    return bandwidth_bps * (1.0 - packet_bytes / p_c_bytes);
}

// Fixed points T = B and T = (p/p_c)*B with stability from the sign of r:
// x = 0 has eigenvalue r, x = r has eigenvalue -r.
inline std::vector<FixedPoint> fixed_points(double bandwidth_bps, double packet_bytes,
                                            double p_c_bytes) {
    double r = normal_form_rate(bandwidth_bps, packet_bytes, p_c_bytes);
    double ramp = (packet_bytes / p_c_bytes) * bandwidth_bps;
    if (r == 0.0)
        return {{bandwidth_bps, Stability::degenerate, false}};
    Stability at_bandwidth = r < 0 ? Stability::stable : Stability::unstable;
    Stability at_ramp = r < 0 ? Stability::unstable : Stability::stable;
    return {{bandwidth_bps, at_bandwidth, false},
            {ramp, at_ramp, ramp > bandwidth_bps}};
}

enum class OdeMethod { rk4, euler };

// Integrates dx/dt = r*x - x^2 with a fixed step. RK4 by default; forward
// Euler kept for side-by-side comparison. The trajectory includes x0, so
// it holds steps + 1 values.
inline std::vector<double> integrate(double x0, double r, double dt, long steps,
                                     OdeMethod method = OdeMethod::rk4) {
    if (x0 < 0)
        throw std::invalid_argument("x0 must be nonnegative");
    if (!(dt > 0))
        throw std::invalid_argument("dt must be positive");
    if (steps < 1)
        throw std::invalid_argument("steps must be at least 1");
    double scale = std::max(std::fabs(r), x0);
    if (scale > 0 && dt * scale >= 1.0)
        throw std::invalid_argument("dt too large for stability: require dt < 1/max(|r|, x0)");

    auto f = [r](double x) { return r * x - x * x; };
    std::vector<double> trajectory;
    trajectory.reserve(static_cast<size_t>(steps) + 1);
    double x = x0;
    trajectory.push_back(x);
    for (long i = 0; i < steps; ++i) {
        if (method == OdeMethod::euler) {
            x += dt * f(x);
        } else {
            double k1 = f(x);
            double k2 = f(x + 0.5 * dt * k1);
            double k3 = f(x + 0.5 * dt * k2);
            double k4 = f(x + dt * k3);
            x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        trajectory.push_back(x);
    }
    return trajectory;
}

// Closed-form logistic solution of dx/dt = r*x - x^2.
inline double logistic_solution(double x0, double r, double t) {
    if (x0 == 0.0)
        return 0.0;
    if (r == 0.0)
        return x0 / (1.0 + x0 * t);
    double e = std::exp(r * t);
    return r * x0 * e / (r + x0 * (e - 1.0));
}

struct BranchRow {
    double packet_bytes;
    double x_zero_branch;            // deficit 0, throughput at bandwidth
    double x_rate_branch;            // deficit r(p), the saturated branch
    Stability zero_branch_stability;
    Stability rate_branch_stability;
};

// Branch table for the bifurcation diagram, ordered by descending packet
// size to match the reversed axis of the source plots.
inline std::vector<BranchRow> bifurcation_branches(double bandwidth_bps, double p_c_bytes,
                                                   std::vector<double> p_values) {
    if (p_values.empty())
        throw std::invalid_argument("p_values must be nonempty");
    std::sort(p_values.begin(), p_values.end(), std::greater<>());
    std::vector<BranchRow> rows;
    rows.reserve(p_values.size());
    for (double p : p_values) {
        double r = normal_form_rate(bandwidth_bps, p, p_c_bytes);
        Stability zero_stab = r == 0 ? Stability::degenerate
                              : r < 0 ? Stability::stable
                                      : Stability::unstable;
        Stability rate_stab = r == 0 ? Stability::degenerate
                              : r < 0 ? Stability::unstable
                                      : Stability::stable;
        rows.push_back({p, 0.0, r, zero_stab, rate_stab});
    }
    return rows;
}

} // namespace linksat
