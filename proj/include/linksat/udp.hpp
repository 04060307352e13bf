#pragma once

// Sender/receiver pair for real-network payload sweeps: paced UDP streams
// of fixed payload with a 12-byte probe header (sequence + monotonic send
// timestamp, both big-endian), receiver-side goodput/loss/jitter
// accounting. Sender and receiver normally run as separate processes, like
// an Iperf client/server pair; run_sweep can also host an in-process
// receiver for loopback use.
//
// Ethernet flow control cannot be toggled from here; for real-NIC runs the
// operator must disable it on both hosts, and results record the setting
// as unverified.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "frame.hpp"
#include "sweep.hpp"

namespace linksat {

constexpr int probe_header_bytes = 12;   // u32 sequence + u64 nanoseconds

struct ProbePacket {
    std::uint32_t sequence = 0;
    std::uint64_t send_timestamp_ns = 0;
};

inline void encode_probe(const ProbePacket& p, std::vector<std::uint8_t>& buf, int payload) {
    buf.assign(static_cast<std::size_t>(payload), 0);
    for (int i = 0; i < 4; ++i)
        buf[i] = static_cast<std::uint8_t>(p.sequence >> (8 * (3 - i)));
    for (int i = 0; i < 8; ++i)
        buf[4 + i] = static_cast<std::uint8_t>(p.send_timestamp_ns >> (8 * (7 - i)));
}

inline ProbePacket decode_probe(const std::uint8_t* data, std::size_t len) {
    if (len < probe_header_bytes)
        throw std::runtime_error("datagram shorter than probe header");
    ProbePacket p;
    for (int i = 0; i < 4; ++i)
        p.sequence = (p.sequence << 8) | data[i];
    for (int i = 0; i < 8; ++i)
        p.send_timestamp_ns = (p.send_timestamp_ns << 8) | data[4 + i];
    return p;
}

struct StreamReport {
    int payload_bytes = 0;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    double duration_s = 0;
    double goodput_bps = 0;
    double throughput_bps = 0;
    double loss_fraction = 0;
    double jitter_s = 0;
};

inline SweepSample to_sweep_sample(const StreamReport& r) {
    SweepSample s;
    s.payload_bytes = r.payload_bytes;
    s.frame_bytes = total_frame_size(r.payload_bytes);
    s.offered_pps = r.duration_s > 0 ? static_cast<double>(r.sent) / r.duration_s : 0;
    s.delivered_pps = r.duration_s > 0 ? static_cast<double>(r.received) / r.duration_s : 0;
    s.goodput_bps = r.goodput_bps;
    s.throughput_bps = r.throughput_bps;
    s.loss_fraction = r.loss_fraction;
    s.jitter_s = r.jitter_s;
    return s;
}

namespace detail {

inline std::uint64_t monotonic_ns() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
}

class Socket {
public:
    Socket() : fd_(::socket(AF_INET, SOCK_DGRAM, 0)) {
        if (fd_ < 0)
            throw std::runtime_error(std::string("socket() failed: ") + std::strerror(errno));
    }
    ~Socket() {
        if (fd_ >= 0)
            ::close(fd_);
    }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    int fd() const { return fd_; }

private:
    int fd_;
};

inline sockaddr_in resolve(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw std::runtime_error("inet_pton() failed for address: " + host);
    return addr;
}

// parse "addr:port"
inline std::pair<std::string, std::uint16_t> split_endpoint(const std::string& endpoint) {
    auto colon = endpoint.rfind(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("endpoint must be <addr>:<port>, got: " + endpoint);
    int port = std::stoi(endpoint.substr(colon + 1));
    if (port <= 0 || port > 65535)
        throw std::invalid_argument("port out of range in endpoint: " + endpoint);
    return {endpoint.substr(0, colon), static_cast<std::uint16_t>(port)};
}

} // namespace detail

// Paced fixed-payload stream of probe packets. Pacing targets packet i at
// i * payload*8/target_goodput on the monotonic clock: coarse sleep until
// near the slot, then spin out the residual.
inline StreamReport send_stream(const std::string& dest_host, std::uint16_t dest_port,
                                int payload, double target_goodput_bps, double duration_s) {
    if (payload < probe_header_bytes)
        throw std::invalid_argument("payload must be at least 12 bytes (probe header)");
    if (payload > fragmentation_threshold())
        throw would_fragment_error(payload);
    if (!(target_goodput_bps > 0))
        throw std::invalid_argument("target goodput must be positive");
    if (!(duration_s > 0))
        throw std::invalid_argument("duration must be positive");

    detail::Socket sock;
    sockaddr_in dest = detail::resolve(dest_host, dest_port);

    const double interval_ns = payload * 8.0 / target_goodput_bps * 1e9;
    const std::uint64_t t0 = detail::monotonic_ns();
    const std::uint64_t deadline = t0 + static_cast<std::uint64_t>(duration_s * 1e9);

    std::vector<std::uint8_t> buf;
    std::uint64_t sent = 0;
    for (std::uint32_t seq = 0;; ++seq) {
        std::uint64_t slot = t0 + static_cast<std::uint64_t>(seq * interval_ns);
        if (slot >= deadline)
            break;
        std::uint64_t now = detail::monotonic_ns();
        if (slot > now + 100000)   // sleep to within 100 us, then spin
            std::this_thread::sleep_for(std::chrono::nanoseconds(slot - now - 100000));
        while (detail::monotonic_ns() < slot) {
        }
        ProbePacket p{seq, detail::monotonic_ns() - t0};
        encode_probe(p, buf, payload);
        ssize_t n = ::sendto(sock.fd(), buf.data(), buf.size(), 0,
                             reinterpret_cast<const sockaddr*>(&dest), sizeof(dest));
        if (n < 0)
            throw std::runtime_error(std::string("sendto() failed: ") + std::strerror(errno));
        ++sent;
    }
    double elapsed = (detail::monotonic_ns() - t0) / 1e9;

    StreamReport report;
    report.payload_bytes = payload;
    report.sent = sent;
    report.duration_s = elapsed;
    report.goodput_bps = sent * payload * 8.0 / elapsed;
    report.throughput_bps = throughput_from_goodput(report.goodput_bps, payload);
    return report;
}

// Bound receive socket; collect() accounts one stream's worth of packets.
class UdpReceiver {
public:
    UdpReceiver(const std::string& listen_host, std::uint16_t port) {
        int one = 1;
        ::setsockopt(sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        int rcvbuf = 4 * 1024 * 1024;
        ::setsockopt(sock_.fd(), SOL_SOCKET, SO_RCVBUF, &rcvbuf, sizeof(rcvbuf));
        sockaddr_in addr = detail::resolve(listen_host, port);
        if (::bind(sock_.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) < 0)
            throw std::runtime_error(std::string("bind() failed: ") + std::strerror(errno));
    }

    // Receives for up to duration_s; returns an empty-stream report (all
    // zero rates) if nothing arrives. Loss comes from sequence-number gaps.
    StreamReport collect(double duration_s, double idle_timeout_s = 0.5) {
        std::uint64_t t0 = detail::monotonic_ns();
        std::uint64_t deadline = t0 + static_cast<std::uint64_t>(duration_s * 1e9);

        std::vector<std::uint8_t> buf(65536);
        std::uint64_t received = 0, bytes = 0;
        std::uint32_t min_seq = 0, max_seq = 0;
        int payload = 0;
        bool first = true;
        double jitter = 0;
        std::uint64_t prev_arrival = 0, prev_departure = 0;
        std::uint64_t first_arrival = 0, last_arrival = 0;

        for (;;) {
            std::uint64_t now = detail::monotonic_ns();
            if (now >= deadline)
                break;
            std::uint64_t wait_ns = deadline - now;
            if (received > 0) {
                std::uint64_t idle_ns = static_cast<std::uint64_t>(idle_timeout_s * 1e9);
                if (wait_ns > idle_ns)
                    wait_ns = idle_ns;
            }
            pollfd pfd{sock_.fd(), POLLIN, 0};
            int rc = ::poll(&pfd, 1, static_cast<int>(wait_ns / 1000000) + 1);
            if (rc < 0)
                throw std::runtime_error(std::string("poll() failed: ") + std::strerror(errno));
            if (rc == 0) {
                if (received > 0)
                    break;   // stream ended
                continue;
            }
            ssize_t n = ::recv(sock_.fd(), buf.data(), buf.size(), 0);
            if (n < 0)
                throw std::runtime_error(std::string("recv() failed: ") + std::strerror(errno));
            std::uint64_t arrival = detail::monotonic_ns();
            ProbePacket p = decode_probe(buf.data(), static_cast<std::size_t>(n));
            if (first) {
                payload = static_cast<int>(n);
                min_seq = max_seq = p.sequence;
                first_arrival = arrival;
                first = false;
            } else {
                min_seq = std::min(min_seq, p.sequence);
                max_seq = std::max(max_seq, p.sequence);
                double d = static_cast<double>(arrival - prev_arrival) -
                           static_cast<double>(p.send_timestamp_ns - prev_departure);
                jitter += (std::abs(d) / 1e9 - jitter) / 16.0;
            }
            prev_arrival = arrival;
            prev_departure = p.send_timestamp_ns;
            last_arrival = arrival;
            ++received;
            bytes += static_cast<std::uint64_t>(n);
        }

        StreamReport report;
        if (received == 0)
            return report;
        report.payload_bytes = payload;
        report.received = received;
        report.sent = static_cast<std::uint64_t>(max_seq) - min_seq + 1;
        double span = last_arrival > first_arrival ? (last_arrival - first_arrival) / 1e9
                                                   : duration_s;
        report.duration_s = span;
        report.goodput_bps = bytes * 8.0 / span;
        report.throughput_bps = throughput_from_goodput(report.goodput_bps, payload);
        report.loss_fraction =
            1.0 - static_cast<double>(received) / static_cast<double>(report.sent);
        report.jitter_s = jitter;
        return report;
    }

private:
    detail::Socket sock_;
};

// Sweeps payload sizes against a destination, one paced stream per payload
// with a quiet gap in between to let queues drain. When listen_host is
// nonempty an in-process receiver is bound on the destination port and its
// reports (which carry loss) are used; otherwise reports are sender-side.
inline SweepSeries run_sweep(const std::string& dest_host, std::uint16_t dest_port,
                             const std::vector<int>& payloads, double target_goodput_bps,
                             double per_step_duration_s, double quiet_gap_s = 0.25,
                             const std::string& listen_host = "") {
    SweepSeries series;
    for (int payload : payloads) {
        try {
        if (listen_host.empty()) {
            series.push_back(to_sweep_sample(
                send_stream(dest_host, dest_port, payload, target_goodput_bps,
                            per_step_duration_s)));
        } else {
            UdpReceiver receiver(listen_host, dest_port);
            StreamReport rx;
            std::thread rx_thread([&] {
                rx = receiver.collect(per_step_duration_s + 1.0);
            });
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
            StreamReport tx = send_stream(dest_host, dest_port, payload, target_goodput_bps,
                                          per_step_duration_s);
            rx_thread.join();
            SweepSample s = to_sweep_sample(rx);
            s.offered_pps = tx.duration_s > 0 ? tx.sent / tx.duration_s : 0;
            series.push_back(s);
        }
        } catch (const std::exception&) {
            // per-step failure: record an empty sample and continue the sweep
            SweepSample failed;
            failed.payload_bytes = payload;
            series.push_back(failed);
        }
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<int>(quiet_gap_s * 1000)));
    }
    return series;
}

} // namespace linksat
