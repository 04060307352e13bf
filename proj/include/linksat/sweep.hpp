#pragma once

// SweepSample / SweepSeries and their CSV schema, shared by the simulator,
// the UDP harness, the estimator, and the CLI.
//
// Schema (8 columns, rows sorted by payload_bytes ascending):
//   payload_bytes,frame_bytes,offered_pps,delivered_pps,goodput_bps,throughput_bps,loss_fraction,jitter_s
// Rates are written with 10 significant digits so that a round trip
// through text preserves them to better than 1e-9 relative.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace linksat {

struct SweepSample {
    int payload_bytes = 0;
    int frame_bytes = 0;
    double offered_pps = 0;
    double delivered_pps = 0;
    double goodput_bps = 0;
    double throughput_bps = 0;
    double loss_fraction = 0;
    double jitter_s = 0;
};

using SweepSeries = std::vector<SweepSample>;

class csv_error : public std::runtime_error {
public:
    csv_error(const std::string& what, long row)
        : std::runtime_error("CSV row " + std::to_string(row) + ": " + what), row_(row) {}
    long row() const { return row_; }

private:
    long row_;
};

inline const char* sweep_csv_header() {
    return "payload_bytes,frame_bytes,offered_pps,delivered_pps,goodput_bps,"
           "throughput_bps,loss_fraction,jitter_s";
}

inline void write_sweep_csv(std::ostream& out, const SweepSeries& series) {
    out << sweep_csv_header() << '\n';
    char buf[256];
    for (const auto& s : series) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e\n",
                      s.payload_bytes, s.frame_bytes, s.offered_pps, s.delivered_pps,
                      s.goodput_bps, s.throughput_bps, s.loss_fraction, s.jitter_s);
        out << buf;
    }
}

inline SweepSeries read_sweep_csv(std::istream& in) {
    std::string line;
    long row = 0;
    if (!std::getline(in, line))
        throw csv_error("empty input", 0);
    // tolerate a trailing \r from Windows-authored files
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != sweep_csv_header())
        throw csv_error("unexpected header: " + line, 0);

    SweepSeries series;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 8)
            throw csv_error("expected 8 fields, got " + std::to_string(fields.size()), row);
        SweepSample s;
        try {
            s.payload_bytes = std::stoi(fields[0]);
            s.frame_bytes = std::stoi(fields[1]);
            s.offered_pps = std::stod(fields[2]);
            s.delivered_pps = std::stod(fields[3]);
            s.goodput_bps = std::stod(fields[4]);
            s.throughput_bps = std::stod(fields[5]);
            s.loss_fraction = std::stod(fields[6]);
            s.jitter_s = std::stod(fields[7]);
        } catch (const std::exception& e) {
            throw csv_error(std::string("bad numeric field: ") + e.what(), row);
        }
        series.push_back(s);
    }
    return series;
}

} // namespace linksat
