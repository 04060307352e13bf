// linksat: single-link saturation toolkit CLI.
//
// Subcommands:
//   simulate   run the per-packet link simulator over a payload sweep
//   analyze    fit the two-segment saturation model to a sweep CSV
//   bifurcate  emit the transcritical bifurcation branch table
//   measure    real-network UDP harness (send / recv / sweep)
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linksat/bifurcation.hpp"
#include "linksat/estimator.hpp"
#include "linksat/frame.hpp"
#include "linksat/simulator.hpp"
#include "linksat/sweep.hpp"
#include "linksat/udp.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file(path, content);
}

linksat::SweepSeries load_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    return linksat::read_sweep_csv(in);
}

int cmd_simulate(double bandwidth, double tau, double rate, double time, int from, int to,
                 int step, std::uint64_t seed, double noise, double service_effect,
                 bool serial, const std::string& out) {
    linksat::SimConfig base;
    base.bandwidth_bps = bandwidth;
    base.per_packet_service_s = tau;
    base.offered_goodput_bps = rate;
    base.duration_s = time;
    base.seed = seed;
    base.noise_amplitude = noise;
    base.payload_service_effect = service_effect;
    base.service_model = serial ? linksat::ServiceModel::serial : linksat::ServiceModel::overlap;

    auto series = linksat::sweep(base, from, to, step);
    std::ostringstream csv;
    linksat::write_sweep_csv(csv, series);
    emit(out, csv.str());
    return 0;
}

int cmd_analyze(const std::string& in, const std::string& convention, const std::string& out,
                const std::string& regime_out) {
    auto series = load_series(in);
    linksat::FitOptions opts;
    opts.size_convention = convention == "payload" ? linksat::SizeConvention::payload
                                                   : linksat::SizeConvention::frame;
    auto fit = linksat::fit(series, opts);
    emit(out, linksat::fit_to_json(fit).dump(2) + "\n");

    auto points = linksat::classify(series, fit);
    std::ostringstream csv;
    csv << "payload_bytes,frame_bytes,regime,deficit_bps\n";
    char buf[128];
    for (const auto& pt : points) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%s,%.9e\n", pt.payload_bytes, pt.frame_bytes,
                      pt.regime == linksat::Regime::saturated ? "saturated" : "free_flow",
                      pt.deficit_bps);
        csv << buf;
    }
    emit(regime_out, csv.str());

    std::fprintf(stderr, "t_max = %.6g bps, p_c = %.6g %s-bytes, lambda_c = %.6g pps\n",
                 fit.t_max_bps, fit.p_c_bytes, linksat::to_string(fit.size_convention),
                 fit.lambda_c_pps);
    return 0;
}

int cmd_bifurcate(double bandwidth, double p_c, double from, double to, double step,
                  const std::string& out) {
    std::vector<double> p_values;
    for (double p = from; p <= to + 1e-9; p += step)
        p_values.push_back(p);
    auto rows = linksat::bifurcation_branches(bandwidth, p_c, p_values);

    std::ostringstream csv;
    csv << "p_bytes,x_stable_bps,x_unstable_bps,r_bps\n";
    char buf[160];
    for (const auto& row : rows) {
        bool zero_stable = row.zero_branch_stability != linksat::Stability::unstable;
        double x_stable = zero_stable ? row.x_zero_branch : row.x_rate_branch;
        double x_unstable = zero_stable ? row.x_rate_branch : row.x_zero_branch;
        std::snprintf(buf, sizeof(buf), "%.9e,%.9e,%.9e,%.9e\n", row.packet_bytes, x_stable,
                      x_unstable, row.x_rate_branch);
        csv << buf;
    }
    emit(out, csv.str());
    return 0;
}

std::string report_csv(const linksat::SweepSeries& series) {
    std::ostringstream csv;
    linksat::write_sweep_csv(csv, series);
    return csv.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linksat: model, simulate, measure, and fit single-link UDP saturation"};
    app.require_subcommand(1);

    // simulate
    double bandwidth = 100e6, tau = 40e-6, rate = 100e6, sim_time = 10.0;
    int from = 25, to = 1450, step = 25;
    std::uint64_t seed = 1;
    double noise = 0.0, service_effect = 0.0;
    bool serial = false;
    std::string sim_out;
    auto* sim = app.add_subcommand("simulate", "simulate a payload sweep on one link");
    sim->add_option("-B,--bandwidth", bandwidth, "link bandwidth, bits/s")
        ->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_option("--tau", tau, "per-packet NIC processing time, seconds")
        ->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_option("--rate", rate, "offered goodput, bits/s")
        ->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_option("--time", sim_time, "simulated duration per payload, seconds")
        ->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_option("--from", from, "smallest payload, bytes")->capture_default_str();
    sim->add_option("--to", to, "largest payload, bytes")->capture_default_str();
    sim->add_option("--step", step, "payload increment, bytes")->capture_default_str();
    sim->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sim->add_option("--noise", noise, "service-time noise amplitude, in [0, 0.1]")
        ->capture_default_str();
    sim->add_option("--service-effect", service_effect,
                    "payload-dependent processing speedup, in [0, 1)")
        ->capture_default_str();
    sim->add_flag("--serial", serial, "service = processing + serialization (default: overlap)");
    sim->add_option("-o,--out", sim_out, "output CSV path (default stdout)");

    // analyze
    std::string an_in, an_convention = "frame", an_out, an_regime_out;
    auto* an = app.add_subcommand("analyze", "fit the saturation model to a sweep CSV");
    an->add_option("-i,--in", an_in, "input sweep CSV")->required();
    an->add_option("--size-convention", an_convention, "frame or payload")
        ->check(CLI::IsMember({"frame", "payload"}))->capture_default_str();
    an->add_option("-o,--out", an_out, "fit JSON output path (default stdout)");
    an->add_option("--regime-out", an_regime_out, "regime/deficit CSV path (default stdout)");

    // bifurcate
    double bif_B = 100e6, bif_pc = 500, bif_from = 50, bif_to = 1500, bif_step = 25;
    std::string bif_out;
    auto* bif = app.add_subcommand("bifurcate", "emit bifurcation branch table");
    bif->add_option("-B,--bandwidth", bif_B, "bandwidth, bits/s")
        ->check(CLI::PositiveNumber)->capture_default_str();
    bif->add_option("--pc", bif_pc, "critical packet size, bytes")
        ->check(CLI::PositiveNumber)->capture_default_str();
    bif->add_option("--from", bif_from, "smallest packet size, bytes")->capture_default_str();
    bif->add_option("--to", bif_to, "largest packet size, bytes")->capture_default_str();
    bif->add_option("--step", bif_step, "packet size increment, bytes")->capture_default_str();
    bif->add_option("-o,--out", bif_out, "output CSV path (default stdout)");

    // measure
    auto* measure = app.add_subcommand("measure", "real-network UDP harness");
    measure->require_subcommand(1);

    std::string send_dest;
    int send_payload = 1450;
    double send_rate = 10e6, send_time = 10.0;
    auto* send = measure->add_subcommand("send", "paced UDP probe stream");
    send->add_option("--dest", send_dest, "destination <addr>:<port>")->required();
    send->add_option("--payload", send_payload, "UDP payload, bytes")->capture_default_str();
    send->add_option("--rate", send_rate, "target goodput, bits/s")->capture_default_str();
    send->add_option("--time", send_time, "stream duration, seconds")->capture_default_str();

    std::string recv_listen;
    double recv_time = 15.0;
    auto* recv = measure->add_subcommand("recv", "receive and account one stream");
    recv->add_option("--listen", recv_listen, "listen <addr>:<port>")->required();
    recv->add_option("--time", recv_time, "maximum receive window, seconds")
        ->capture_default_str();

    std::string sweep_dest, sweep_listen, sweep_payload_list;
    int sweep_from = 25, sweep_to = 1450, sweep_step = 25;
    double sweep_rate = 10e6, sweep_step_time = 10.0;
    auto* swp = measure->add_subcommand("sweep", "payload sweep of paced streams");
    swp->add_option("--dest", sweep_dest, "destination <addr>:<port>")->required();
    swp->add_option("--from", sweep_from, "smallest payload, bytes")->capture_default_str();
    swp->add_option("--to", sweep_to, "largest payload, bytes")->capture_default_str();
    swp->add_option("--step", sweep_step, "payload increment, bytes")->capture_default_str();
    swp->add_option("--payloads", sweep_payload_list,
                    "comma-separated payload list (overrides --from/--to/--step)");
    swp->add_option("--rate", sweep_rate, "target goodput, bits/s")->capture_default_str();
    swp->add_option("--time-per-step", sweep_step_time, "seconds per payload")
        ->capture_default_str();
    swp->add_option("--listen", sweep_listen,
                    "bind an in-process receiver on this address (loopback use)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(bandwidth, tau, rate, sim_time, from, to, step, seed, noise,
                                service_effect, serial, sim_out);
        if (an->parsed())
            return cmd_analyze(an_in, an_convention, an_out, an_regime_out);
        if (bif->parsed())
            return cmd_bifurcate(bif_B, bif_pc, bif_from, bif_to, bif_step, bif_out);
        if (send->parsed()) {
            auto [host, port] = linksat::detail::split_endpoint(send_dest);
            auto report = linksat::send_stream(host, port, send_payload, send_rate, send_time);
            std::cout << report_csv({linksat::to_sweep_sample(report)});
            return 0;
        }
        if (recv->parsed()) {
            auto [host, port] = linksat::detail::split_endpoint(recv_listen);
            linksat::UdpReceiver receiver(host, port);
            auto report = receiver.collect(recv_time);
            if (report.received == 0) {
                std::cerr << "no packets received\n";
                std::cout << linksat::sweep_csv_header() << "\n";
                return 0;
            }
            std::cout << report_csv({linksat::to_sweep_sample(report)});
            return 0;
        }
        if (swp->parsed()) {
            auto [host, port] = linksat::detail::split_endpoint(sweep_dest);
            std::vector<int> payloads;
            if (!sweep_payload_list.empty()) {
                std::istringstream ss(sweep_payload_list);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    payloads.push_back(std::stoi(tok));
            } else {
                for (int p = sweep_from; p <= sweep_to; p += sweep_step)
                    payloads.push_back(p);
            }
            std::string listen_host;
            if (!sweep_listen.empty())
                listen_host = linksat::detail::split_endpoint(sweep_listen).first;
            auto series = linksat::run_sweep(host, port, payloads, sweep_rate, sweep_step_time,
                                             0.25, listen_host);
            std::cout << report_csv(series);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
