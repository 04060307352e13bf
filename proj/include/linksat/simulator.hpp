#pragma once

// Deterministic per-packet single-link simulator with a per-packet NIC
// processing bottleneck. The sender offers paced packets at the configured
// goodput; the link serves them FIFO through a single server whose service
// time is max(processing, serialization) by default, so processing of one
// packet overlaps wire transmission of the previous. Excess packets beyond
// the buffer are dropped (no flow-control backpressure). The clock is
// virtual: a 10 s run at tens of kpps completes in a fraction of a second.

#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>

#include "frame.hpp"
#include "sweep.hpp"

namespace linksat {

enum class ServiceModel {
    overlap,   // service = max(processing, serialization)
    serial     // service = processing + serialization
};

struct SimConfig {
    double bandwidth_bps = 100e6;
    double per_packet_service_s = 40e-6;   // NIC processing time per packet
    int payload_bytes = 1450;
    double offered_goodput_bps = 100e6;
    double duration_s = 10.0;
    int buffer_capacity = 64;              // packets waiting, excluding the one in service
    double noise_amplitude = 0.0;          // multiplicative jitter on processing times
    std::uint64_t seed = 1;
    ServiceModel service_model = ServiceModel::overlap;
    // Optional mild reduction of processing time at small payloads, mimicking
    // the observed slow climb of saturated packet rate. Off by default.
    double payload_service_effect = 0.0;

    void validate() const {
        if (!(bandwidth_bps > 0))
            throw std::invalid_argument("bandwidth must be positive");
        if (!(per_packet_service_s > 0))
            throw std::invalid_argument("per-packet service time must be positive");
        if (payload_bytes <= 0)
            throw std::invalid_argument("payload must be positive");
        if (payload_bytes > fragmentation_threshold())
            throw would_fragment_error(payload_bytes);
        if (!(offered_goodput_bps > 0))
            throw std::invalid_argument("offered goodput must be positive");
        if (!(duration_s > 0))
            throw std::invalid_argument("duration must be positive");
        if (buffer_capacity <= 0)
            throw std::invalid_argument("buffer capacity must be positive");
        if (noise_amplitude < 0 || noise_amplitude > 0.1)
            throw std::invalid_argument("noise amplitude must be in [0, 0.1]");
        if (payload_service_effect < 0 || payload_service_effect >= 1)
            throw std::invalid_argument("payload service effect must be in [0, 1)");
    }
};

struct SimResult {
    double offered_pps = 0;
    double delivered_pps = 0;
    double goodput_bps = 0;
    double throughput_bps = 0;
    double loss_fraction = 0;
    double jitter_s = 0;
    std::uint64_t offered_count = 0;
    std::uint64_t delivered_count = 0;
    std::uint64_t dropped_count = 0;
};

inline SimResult simulate(const SimConfig& cfg) {
    cfg.validate();

    const int frame_bytes = total_frame_size(cfg.payload_bytes);
    const double frame_bits = frame_bytes * 8.0;
    const double serialization_s = frame_bits / cfg.bandwidth_bps;
    const double arrival_interval = cfg.payload_bytes * 8.0 / cfg.offered_goodput_bps;

    // Saturated packet rates creep up at small payloads when the optional
    // effect is enabled; scaled against the largest unfragmented payload.
    double processing_base = cfg.per_packet_service_s;
    if (cfg.payload_service_effect > 0) {
        double shrink = (1450.0 - cfg.payload_bytes) / 1450.0;
        if (shrink < 0)
            shrink = 0;
        processing_base *= 1.0 - cfg.payload_service_effect * shrink;
    }

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    std::deque<double> in_flight;   // completion times of accepted, unfinished packets
    double last_completion = 0.0;
    std::uint64_t offered = 0, dropped = 0, delivered = 0;
    double prev_departure = 0.0;
    bool have_prev_delivered = false;
    double prev_delivered_arrival = 0.0;
    double jitter = 0.0;

    for (std::uint64_t i = 0;; ++i) {
        double t_arr = static_cast<double>(i) * arrival_interval;
        if (t_arr >= cfg.duration_s)
            break;
        ++offered;

        while (!in_flight.empty() && in_flight.front() <= t_arr)
            in_flight.pop_front();

        // queue excludes the packet in service
        std::size_t waiting = in_flight.empty() ? 0 : in_flight.size() - 1;
        if (waiting >= static_cast<std::size_t>(cfg.buffer_capacity)) {
            ++dropped;
            continue;
        }

        double processing = processing_base;
        if (cfg.noise_amplitude > 0)
            processing *= 1.0 + cfg.noise_amplitude * unit(rng);
        double service = cfg.service_model == ServiceModel::overlap
                             ? std::max(processing, serialization_s)
                             : processing + serialization_s;

        double start = std::max(t_arr, last_completion);
        double completion = start + service;
        last_completion = completion;
        in_flight.push_back(completion);

        if (completion <= cfg.duration_s) {
            ++delivered;
            if (have_prev_delivered) {
                double d = (t_arr - prev_delivered_arrival) - (completion - prev_departure);
                jitter += (std::fabs(d) - jitter) / 16.0;
            }
            prev_delivered_arrival = t_arr;
            prev_departure = completion;
            have_prev_delivered = true;
        }
    }

    SimResult result;
    result.offered_count = offered;
    result.delivered_count = delivered;
    result.dropped_count = dropped;
    result.offered_pps = static_cast<double>(offered) / cfg.duration_s;
    result.delivered_pps = static_cast<double>(delivered) / cfg.duration_s;
    result.goodput_bps = result.delivered_pps * cfg.payload_bytes * 8.0;
    result.throughput_bps = result.delivered_pps * frame_bits;
    result.loss_fraction = offered == 0 ? 0.0 : static_cast<double>(dropped) / offered;
    result.jitter_s = jitter;
    return result;
}

inline SweepSample to_sweep_sample(const SimConfig& cfg, const SimResult& r) {
    SweepSample s;
    s.payload_bytes = cfg.payload_bytes;
    s.frame_bytes = total_frame_size(cfg.payload_bytes);
    s.offered_pps = r.offered_pps;
    s.delivered_pps = r.delivered_pps;
    s.goodput_bps = r.goodput_bps;
    s.throughput_bps = r.throughput_bps;
    s.loss_fraction = r.loss_fraction;
    s.jitter_s = r.jitter_s;
    return s;
}

// Payload sweep; per-payload seeds derive from the base seed so results do
// not depend on iteration order.
inline SweepSeries sweep(SimConfig base, int payload_min, int payload_max, int step) {
    if (payload_min < 12)
        throw std::invalid_argument("payload_min must be at least 12");
    if (payload_max > fragmentation_threshold())
        throw std::invalid_argument("payload_max must not exceed 1472");
    if (payload_min > payload_max)
        throw std::invalid_argument("payload_min must not exceed payload_max");
    if (step <= 0)
        throw std::invalid_argument("step must be positive");

    SweepSeries series;
    for (int payload = payload_min; payload <= payload_max; payload += step) {
        SimConfig cfg = base;
        cfg.payload_bytes = payload;
        cfg.seed = base.seed ^ (static_cast<std::uint64_t>(payload) * 0x9e3779b97f4a7c15ULL);
        series.push_back(to_sweep_sample(cfg, simulate(cfg)));
    }
    return series;
}

} // namespace linksat
