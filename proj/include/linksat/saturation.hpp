#pragma once

// Throughput decomposition T = 8*p*lambda, the free-flow tradeoff curve,
// the critical flow, and the piecewise saturation law.
//
// p throughout is the total on-wire packet size in bytes (payload + 46 B
// of overhead); rates are bits per second. The byte->bit conversion lives
// only in throughput_of and critical_flow.

#include <stdexcept>

namespace linksat {

struct LinkModel {
    double bandwidth_bps;   // link rating B
    double t_max_bps;       // achievable plateau throughput, <= bandwidth
    double p_c_bytes;       // critical packet size

    void validate() const {
        if (!(bandwidth_bps > 0))
            throw std::invalid_argument("bandwidth must be positive");
        if (!(t_max_bps > 0) || t_max_bps > bandwidth_bps)
            throw std::invalid_argument("t_max must be in (0, bandwidth]");
        if (!(p_c_bytes > 0))
            throw std::invalid_argument("p_c must be positive");
    }
};

struct TrafficPoint {
    double packet_size_bytes;
    double flow_rate_pps;
    double throughput_bps;
};

inline double throughput_of(double packet_bytes, double flow_pps) {
    if (!(packet_bytes > 0))
        throw std::invalid_argument("packet size must be positive");
    if (flow_pps < 0)
        throw std::invalid_argument("flow rate must be nonnegative");
    return packet_bytes * 8.0 * flow_pps;
}

inline TrafficPoint make_traffic_point(double packet_bytes, double flow_pps) {
    return {packet_bytes, flow_pps, throughput_of(packet_bytes, flow_pps)};
}

// Maximum packet rate the link path can carry at the plateau throughput.
inline double critical_flow(const LinkModel& model) {
    model.validate();
    return model.t_max_bps / (model.p_c_bytes * 8.0);
}

// Saturated-regime law: throughput scales as p / p_c.
inline double saturated_throughput(const LinkModel& model, double packet_bytes) {
    model.validate();
    if (!(packet_bytes > 0))
        throw std::invalid_argument("packet size must be positive");
    if (packet_bytes > model.p_c_bytes)
        throw std::invalid_argument("packet size exceeds p_c: not in the saturated regime");
    return (packet_bytes / model.p_c_bytes) * model.t_max_bps;
}

// Piecewise law over both regimes: linear ramp below p_c, plateau above.
inline double model_throughput(const LinkModel& model, double packet_bytes) {
    model.validate();
    if (!(packet_bytes > 0))
        throw std::invalid_argument("packet size must be positive");
    double ramp = (packet_bytes / model.p_c_bytes) * model.t_max_bps;
    return ramp < model.t_max_bps ? ramp : model.t_max_bps;
}

// Slope dp/dlambda = -p/lambda along a constant-throughput curve.
inline double tradeoff_slope(double packet_bytes, double flow_pps) {
    if (!(packet_bytes > 0))
        throw std::invalid_argument("packet size must be positive");
    if (!(flow_pps > 0))
        throw std::invalid_argument("flow rate must be positive");
    return -packet_bytes / flow_pps;
}

} // namespace linksat
