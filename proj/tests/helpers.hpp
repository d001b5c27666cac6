#pragma once

#include <string>

#include "hetplan/platform.hpp"
#include "hetplan/report.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
    return hetplan::report::read_file(fixture_path(name));
}

inline hetplan::PlatformDescription load_platform_fixture(const std::string& name) {
    return hetplan::load_platform(read_fixture(name));
}

inline hetplan::KernelProfile load_profile_fixture(const std::string& name,
                                                   const hetplan::PlatformDescription& platform) {
    return hetplan::load_profile(read_fixture(name), platform);
}

// Minimal single-cluster platform used by unit tests that do not need a fixture.
inline std::string minimal_platform_json() {
    return R"({
      "pes": [
        {
          "id": "cpu",
          "kind": "cpu-cluster",
          "core_count": 4,
          "opps": [
            {"freq_hz": 1.0e9, "voltage_v": 0.9},
            {"freq_hz": 2.0e9, "voltage_v": 1.1}
          ],
          "c_eff_farads": 1.0e-9,
          "p_static_watts": 0.2,
          "cycles_per_mac": 2.0,
          "parallel_overhead_alpha": 0.0833333333333333
        }
      ],
      "thermal": {
        "r_th_k_per_w": 10.0,
        "c_th_j_per_k": 5.0,
        "t_amb_c": 30.0,
        "t_trip_c": 45.0,
        "hysteresis_c": 2.0,
        "governor_period_s": 0.1
      }
    })";
}

}  // namespace testutil
