#include "wlansim/wlan/radio.hpp"

#include <cmath>

namespace wlansim::wlan {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double path_loss_db(double distance_m, int walls, const ChannelParams& ch) {
    const double d = distance_m < 1.0 ? 1.0 : distance_m;
    return ch.pl0_db + 10.0 * ch.exponent * std::log10(d) +
           static_cast<double>(walls) * ch.wall_loss_db;
}

double sinr_db(double signal_dbm, std::span<const double> interferer_dbm,
               double noise_floor_dbm) {
    double denom_mw = dbm_to_mw(noise_floor_dbm);
    for (double i : interferer_dbm) {
        denom_mw += dbm_to_mw(i);
    }
    return signal_dbm - mw_to_dbm(denom_mw);
}

bool cca_busy(std::span<const double> rx_dbm, const ChannelParams& ch) {
    if (rx_dbm.empty()) return false;
    double sum_mw = 0.0;
    for (double r : rx_dbm) {
        sum_mw += dbm_to_mw(r);
    }
    return mw_to_dbm(sum_mw) >= ch.cca_threshold_dbm;
}

double mcs_lookup(double sinr, const McsTable& table) {
    double rate = 0.0;
    for (const McsEntry& e : table) {
        if (sinr >= e.min_sinr_db) {
            rate = e.phy_rate_mbps;
        } else {
            break;
        }
    }
    return rate;
}

}  // namespace wlansim::wlan
