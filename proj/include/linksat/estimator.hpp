#pragma once

// Two-segment fit of a payload sweep: a through-origin line in the
// saturated region and a flat plateau in free flow. The breakpoint is
// found by exhaustive scan over samples (at most a few dozen), which is
// exact and needs no convergence machinery.
//
// The regression always runs against the on-wire frame size, the
// physically meaningful variable for the saturation law; size_convention
// only selects how the recovered critical size is reported (frame bytes,
// or payload bytes = frame - 46).

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "frame.hpp"
#include "sweep.hpp"

namespace linksat {

enum class SizeConvention { frame, payload };

inline const char* to_string(SizeConvention c) {
    return c == SizeConvention::frame ? "frame" : "payload";
}

enum class Regime { free_flow, saturated };

class fit_degenerate_error : public std::runtime_error {
public:
    explicit fit_degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

struct FitResult {
    double t_max_bps = 0;
    double p_c_bytes = 0;           // in the chosen size convention
    double lambda_c_pps = 0;        // t_max / (8 * p_c), exactly
    std::size_t breakpoint_index = 0;   // last saturated sample in the sorted series
    double residual_sse = 0;
    std::vector<Regime> regime_labels;
    SizeConvention size_convention = SizeConvention::frame;
    // free-intercept diagnostic fit of the saturated segment; a large
    // intercept relative to t_max flags a violation of the zero-intercept law
    double diag_slope = 0;
    double diag_intercept = 0;
};

struct FitOptions {
    SizeConvention size_convention = SizeConvention::frame;
    double plateau_loss_threshold = 0.05;   // samples lossier than this are
                                            // excluded from the plateau mean
};

namespace detail {

inline void check_sorted_distinct(const SweepSeries& series) {
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i].frame_bytes <= series[i - 1].frame_bytes)
            throw std::invalid_argument("series must be sorted by size with distinct sizes");
}

} // namespace detail

inline FitResult fit(const SweepSeries& series, FitOptions opts = {}) {
    if (series.size() < 4)
        throw fit_degenerate_error("need at least 4 samples at distinct sizes, got " +
                                   std::to_string(series.size()));
    detail::check_sorted_distinct(series);

    const std::size_t n = series.size();
    double best_sse = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    double best_t_max = 0, best_slope = 0;
    bool found = false;

    // candidate k: samples [0..k] saturated, [k+1..n-1] plateau
    for (std::size_t k = 1; k + 2 < n; ++k) {
        double sum_st = 0, sum_ss = 0;
        for (std::size_t i = 0; i <= k; ++i) {
            double s = series[i].frame_bytes;
            sum_st += s * series[i].throughput_bps;
            sum_ss += s * s;
        }
        double slope = sum_st / sum_ss;

        double plateau_sum = 0;
        std::size_t plateau_n = 0;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (series[i].loss_fraction > opts.plateau_loss_threshold)
                continue;
            plateau_sum += series[i].throughput_bps;
            ++plateau_n;
        }
        if (plateau_n < 2)
            continue;
        double t_max = plateau_sum / plateau_n;

        double sse = 0;
        for (std::size_t i = 0; i <= k; ++i) {
            double r = series[i].throughput_bps - slope * series[i].frame_bytes;
            sse += r * r;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (series[i].loss_fraction > opts.plateau_loss_threshold)
                continue;   // excluded from the plateau fit entirely
            double r = series[i].throughput_bps - t_max;
            sse += r * r;
        }

        // k grows with size, so <= breaks ties toward the larger breakpoint
        if (!found || sse <= best_sse) {
            best_sse = sse;
            best_k = k;
            best_t_max = t_max;
            best_slope = slope;
            found = true;
        }
    }
    if (!found)
        throw fit_degenerate_error("no candidate breakpoint leaves 2 samples on each side");
    if (!(best_slope > 0))
        throw fit_degenerate_error("saturated segment has nonpositive slope");

    FitResult result;
    result.size_convention = opts.size_convention;
    result.t_max_bps = best_t_max;
    double p_c_frame = best_t_max / best_slope;
    result.p_c_bytes = opts.size_convention == SizeConvention::frame
                           ? p_c_frame
                           : p_c_frame - FrameLayout::total_overhead;
    result.lambda_c_pps = result.t_max_bps / (8.0 * result.p_c_bytes);
    result.breakpoint_index = best_k;
    result.residual_sse = best_sse;
    result.regime_labels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        result.regime_labels[i] = i <= best_k ? Regime::saturated : Regime::free_flow;

    // free-intercept diagnostic over the saturated segment
    {
        std::size_t m = best_k + 1;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double x = series[i].frame_bytes;
            double y = series[i].throughput_bps;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double denom = m * sxx - sx * sx;
        if (denom != 0) {
            result.diag_slope = (m * sxy - sx * sy) / denom;
            result.diag_intercept = (sy - result.diag_slope * sx) / m;
        }
    }
    return result;
}

struct RegimePoint {
    int payload_bytes;
    int frame_bytes;
    Regime regime;
    double deficit_bps;   // t_max_hat - T, the bifurcation-diagram ordinate
};

inline std::vector<RegimePoint> classify(const SweepSeries& series, const FitResult& fit) {
    if (series.empty())
        throw std::invalid_argument("series is empty");
    if (fit.regime_labels.size() != series.size())
        throw std::invalid_argument("fit does not correspond to this series");
    std::vector<RegimePoint> points;
    points.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        points.push_back({series[i].payload_bytes, series[i].frame_bytes,
                          fit.regime_labels[i],
                          fit.t_max_bps - series[i].throughput_bps});
    }
    return points;
}

inline nlohmann::json fit_to_json(const FitResult& fit) {
    return nlohmann::json{{"t_max_bps", fit.t_max_bps},
                          {"p_c_bytes", fit.p_c_bytes},
                          {"lambda_c_pps", fit.lambda_c_pps},
                          {"breakpoint_index", fit.breakpoint_index},
                          {"residual_sse", fit.residual_sse},
                          {"size_convention", to_string(fit.size_convention)}};
}

} // namespace linksat
