#pragma once

#include <stdexcept>

namespace rail::radio {

/// Log-distance path-loss model:
///   RSSI(d) = RSSI(d0) - 10 n log10(d / d0) + N(0, sigma^2)
struct PathLossModel {
    double rssi_d0 = -40.0;  // dBm at the reference distance
    double d0 = 1.0;         // m
    double n_exp = 2.0;
    double sigma = 0.0;      // dB

    /// Throws std::invalid_argument if d0 <= 0, n_exp <= 0 or sigma < 0.
    void validate() const;
};

/// Received strength at distance d with a caller-supplied noise sample.
double rssi_at(const PathLossModel& model, double d, double noise_draw = 0.0);

/// Inverts the model (noise-free); always strictly positive.
double estimate_distance(const PathLossModel& model, double rssi);

}  // namespace rail::radio
