#include <doctest.h>

#include <vector>

#include "support.hpp"
#include "wlansim/sim/rng.hpp"
#include "wlansim/wlan/radio.hpp"

using namespace wlansim;
using wlan::ChannelParams;

TEST_CASE("path loss follows the log-distance model") {
    const ChannelParams ch = wlan::default_channel();
    CHECK(wlan::path_loss_db(1.0, 0, ch) == doctest::Approx(40.0));
    CHECK(wlan::path_loss_db(10.0, 0, ch) == doctest::Approx(75.0));
    // 40 + 35*log10(30) + 5, evaluated by hand
    CHECK(wlan::path_loss_db(30.0, 1, ch) == doctest::Approx(96.70).epsilon(0.0002));
    // below the 1 m reference the loss clamps
    CHECK(wlan::path_loss_db(0.2, 0, ch) == doctest::Approx(40.0));
}

TEST_CASE("path loss is monotone in distance and walls") {
    const ChannelParams ch = wlan::default_channel();
    sim::RngStream rng(5, "test.pl");
    for (int i = 0; i < 500; ++i) {
        const double d1 = rng.uniform_range(0.0, 80.0);
        const double d2 = d1 + rng.uniform_range(0.0, 40.0);
        const int w1 = static_cast<int>(rng.uniform_int(4));
        const int w2 = w1 + static_cast<int>(rng.uniform_int(3));
        REQUIRE(wlan::path_loss_db(d2, w1, ch) >= wlan::path_loss_db(d1, w1, ch));
        REQUIRE(wlan::path_loss_db(d1, w2, ch) >= wlan::path_loss_db(d1, w1, ch));
    }
}

TEST_CASE("rx power is tx minus path loss") {
    CHECK(wlan::rx_power_dbm(23.0, 91.70) == doctest::Approx(-68.70));
    CHECK(wlan::rx_power_dbm(7.0, 91.70) == doctest::Approx(-84.70));
    CHECK(wlan::rx_power_dbm(-12.5, 0.0) == doctest::Approx(-12.5));
}

TEST_CASE("sinr computes over linear-domain sums") {
    SUBCASE("noise only") {
        CHECK(wlan::sinr_db(-49.7, {}, -95.0) == doctest::Approx(45.3));
        CHECK(wlan::sinr_db(-95.0, {}, -95.0) == doctest::Approx(0.0));
    }
    SUBCASE("single interferer, oracle value") {
        const std::vector<double> interferers = {-84.7};
        const double expected = testsupport::sinr_oracle_db(-49.7, interferers, -95.0);
        CHECK(expected == doctest::Approx(34.61).epsilon(0.002));
        CHECK(wlan::sinr_db(-49.7, interferers, -95.0) ==
              doctest::Approx(expected).epsilon(1e-9));
    }
    SUBCASE("anti-monotone in every interferer") {
        sim::RngStream rng(17, "test.sinr");
        for (int i = 0; i < 300; ++i) {
            std::vector<double> interferers;
            const int n = static_cast<int>(rng.uniform_int(4));
            for (int k = 0; k < n; ++k) {
                interferers.push_back(rng.uniform_range(-100.0, -60.0));
            }
            const double signal = rng.uniform_range(-70.0, -30.0);
            const double base = wlan::sinr_db(signal, interferers, -95.0);
            interferers.push_back(rng.uniform_range(-100.0, -60.0));
            REQUIRE(wlan::sinr_db(signal, interferers, -95.0) <= base);
            // empty list reduces to signal - noise
            REQUIRE(wlan::sinr_db(signal, {}, -95.0) ==
                    doctest::Approx(signal + 95.0));
        }
    }
}

TEST_CASE("cca threshold") {
    const ChannelParams ch = wlan::default_channel();  // cca -82 dBm
    CHECK(wlan::cca_busy(std::vector<double>{-68.7}, ch));
    CHECK_FALSE(wlan::cca_busy(std::vector<double>{-84.7}, ch));
    CHECK_FALSE(wlan::cca_busy({}, ch));
    // two sub-threshold transmitters can add up over it
    CHECK(wlan::cca_busy(std::vector<double>{-84.0, -84.0}, ch));
}

TEST_CASE("mcs lookup picks the highest supported rate") {
    const wlan::McsTable table = wlan::default_mcs_table();
    CHECK(wlan::mcs_lookup(1.0, table) == 0.0);
    CHECK(wlan::mcs_lookup(2.0, table) == 8.6);  // boundary inclusive
    CHECK(wlan::mcs_lookup(34.6, table) == 129.0);
    CHECK(wlan::mcs_lookup(19.0, table) == 68.8);
    CHECK(wlan::max_phy_rate(table) == 129.0);
}
