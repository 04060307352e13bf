#pragma once

// Ethernet/IP/UDP encapsulation arithmetic: overhead constants,
// fragmentation at the 1500-byte frame-payload limit, and the
// goodput <-> throughput conversion.

#include <stdexcept>
#include <string>
#include <vector>

namespace linksat {

class would_fragment_error : public std::invalid_argument {
public:
    explicit would_fragment_error(int payload)
        : std::invalid_argument("payload of " + std::to_string(payload) +
                                " bytes would fragment (max unfragmented payload is 1472)") {}
};

struct FrameLayout {
    static constexpr int udp_header = 8;
    static constexpr int ip_header = 20;
    static constexpr int eth_overhead = 18;   // header + trailing checksum
    static constexpr int max_frame_payload = 1500;
    static constexpr int max_frame = 1518;

    static constexpr int ip_udp_overhead = udp_header + ip_header;            // 28
    static constexpr int total_overhead = ip_udp_overhead + eth_overhead;     // 46

    static_assert(max_frame == max_frame_payload + eth_overhead);
};

struct FragmentationResult {
    std::vector<int> frame_payload_sizes;
    bool fragmented = false;
};

// Largest UDP payload that still fits a single Ethernet frame:
// payload + 28 bytes of IP/UDP headers must not exceed 1500.
constexpr int fragmentation_threshold() noexcept {
    return FrameLayout::max_frame_payload - FrameLayout::ip_udp_overhead;
}

// On-wire frame size for an unfragmented UDP payload.
inline int total_frame_size(int payload) {
    if (payload <= 0)
        throw std::invalid_argument("payload must be positive");
    if (payload > fragmentation_threshold())
        throw would_fragment_error(payload);
    return payload + FrameLayout::total_overhead;
}

// Splits the frame payload (UDP payload + 28 B of headers) into MTU-sized
// chunks. Accounting is the simple split into a full chunk plus remainder;
// real IP fragmentation would replicate the 20-byte IP header per fragment,
// which is deliberately not modeled here.
inline FragmentationResult fragment(int payload) {
    if (payload <= 0)
        throw std::invalid_argument("payload must be positive");
    FragmentationResult result;
    int frame_payload = payload + FrameLayout::ip_udp_overhead;
    while (frame_payload > FrameLayout::max_frame_payload) {
        result.frame_payload_sizes.push_back(FrameLayout::max_frame_payload);
        frame_payload -= FrameLayout::max_frame_payload;
    }
    result.frame_payload_sizes.push_back(frame_payload);
    result.fragmented = result.frame_payload_sizes.size() > 1;
    return result;
}

// Goodput counts payload bits only; throughput counts the whole frame.
inline double throughput_from_goodput(double goodput_bps, int payload) {
    if (payload <= 0)
        throw std::invalid_argument("payload must be positive");
    if (payload > fragmentation_threshold())
        throw would_fragment_error(payload);
    if (goodput_bps < 0)
        throw std::invalid_argument("goodput must be nonnegative");
    return goodput_bps * static_cast<double>(payload + FrameLayout::total_overhead) / payload;
}

inline double goodput_from_throughput(double throughput_bps, int payload) {
    if (payload <= 0)
        throw std::invalid_argument("payload must be positive");
    if (payload > fragmentation_threshold())
        throw would_fragment_error(payload);
    if (throughput_bps < 0)
        throw std::invalid_argument("throughput must be nonnegative");
    return throughput_bps * payload / static_cast<double>(payload + FrameLayout::total_overhead);
}

} // namespace linksat
