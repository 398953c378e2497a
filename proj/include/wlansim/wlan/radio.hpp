#pragma once

#include <span>
#include <vector>

#include "wlansim/wlan/scenario.hpp"

namespace wlansim::wlan {

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Log-distance path loss with per-wall attenuation:
//   PL = pl0 + 10 * exponent * log10(max(d, 1 m)) + walls * wall_loss
double path_loss_db(double distance_m, int walls, const ChannelParams& ch);

inline double rx_power_dbm(double tx_dbm, double pl_db) { return tx_dbm - pl_db; }

// SINR in dB: signal over the linear-domain sum of interferers plus noise.
double sinr_db(double signal_dbm, std::span<const double> interferer_dbm,
               double noise_floor_dbm);

// Clear channel assessment: busy iff the aggregate received power from the
// given transmitters reaches the CCA threshold. An empty set is idle.
bool cca_busy(std::span<const double> rx_dbm, const ChannelParams& ch);

// Highest rate whose threshold is met; 0 Mbps below the first entry.
double mcs_lookup(double sinr, const McsTable& table);

}  // namespace wlansim::wlan
