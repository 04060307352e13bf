#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "linksat/sweep.hpp"

using namespace linksat;

TEST_CASE("round trip preserves integers exactly and rates to 1e-9 relative") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> rate(1e3, 1e8);
    std::uniform_int_distribution<int> payload(12, 1472);

    SweepSeries series;
    for (int i = 0; i < 50; ++i) {
        SweepSample s;
        s.payload_bytes = payload(rng);
        s.frame_bytes = s.payload_bytes + 46;
        s.offered_pps = rate(rng);
        s.delivered_pps = rate(rng);
        s.goodput_bps = rate(rng);
        s.throughput_bps = rate(rng);
        s.loss_fraction = rate(rng) / 1e8;
        s.jitter_s = rate(rng) / 1e12;
        series.push_back(s);
    }

    std::stringstream ss;
    write_sweep_csv(ss, series);
    auto parsed = read_sweep_csv(ss);
    REQUIRE(parsed.size() == series.size());
    for (size_t i = 0; i < series.size(); ++i) {
        CHECK(parsed[i].payload_bytes == series[i].payload_bytes);
        CHECK(parsed[i].frame_bytes == series[i].frame_bytes);
        CHECK(parsed[i].offered_pps ==
              doctest::Approx(series[i].offered_pps).epsilon(1e-9));
        CHECK(parsed[i].throughput_bps ==
              doctest::Approx(series[i].throughput_bps).epsilon(1e-9));
        CHECK(parsed[i].jitter_s == doctest::Approx(series[i].jitter_s).epsilon(1e-9));
    }
}

TEST_CASE("malformed rows are reported with their row number") {
    std::stringstream ss;
    ss << sweep_csv_header() << "\n";
    ss << "25,71,1,1,1,1,0,0\n";
    ss << "50,96,1,1\n";   // short row
    try {
        read_sweep_csv(ss);
        FAIL("expected csv_error");
    } catch (const csv_error& e) {
        CHECK(e.row() == 2);
    }
}

TEST_CASE("bad header and bad numerics are rejected") {
    std::stringstream bad_header("a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(read_sweep_csv(bad_header), csv_error);

    std::stringstream bad_num;
    bad_num << sweep_csv_header() << "\n25,71,x,1,1,1,0,0\n";
    CHECK_THROWS_AS(read_sweep_csv(bad_num), csv_error);
}
