#include "rail/radio.hpp"

#include <cmath>
#include <string>

namespace rail::radio {

void PathLossModel::validate() const {
    if (!(d0 > 0.0)) throw std::invalid_argument("path loss: d0 must be > 0");
    if (!(n_exp > 0.0)) throw std::invalid_argument("path loss: exponent must be > 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("path loss: sigma must be >= 0");
}

double rssi_at(const PathLossModel& model, double d, double noise_draw) {
    if (!(d > 0.0)) {
        throw std::invalid_argument("rssi_at: distance must be > 0, got " + std::to_string(d));
    }
    return model.rssi_d0 - 10.0 * model.n_exp * std::log10(d / model.d0) + noise_draw;
}

double estimate_distance(const PathLossModel& model, double rssi) {
    return model.d0 * std::pow(10.0, (model.rssi_d0 - rssi) / (10.0 * model.n_exp));
}

}  // namespace rail::radio
