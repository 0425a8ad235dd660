#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cranring {

/// Integer time in units of time (UoT): the time to fill one container.
using Uot = std::int64_t;

enum class TrafficClass : std::uint8_t { CranUp = 0, CranDown = 1, BestEffort = 2 };

constexpr int kTrafficClassCount = 3;

inline const char* to_string(TrafficClass c) {
    switch (c) {
        case TrafficClass::CranUp: return "cran_up";
        case TrafficClass::CranDown: return "cran_down";
        case TrafficClass::BestEffort: return "best_effort";
    }
    return "?";
}

inline bool is_cran(TrafficClass c) { return c != TrafficClass::BestEffort; }

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested antenna count does not fit the ring under the chosen strategy.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A layout constraint (gap, spread, parity) cannot be satisfied.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A reservation or scheduled fill was refused at runtime: the emission
/// schedule claims a container it does not own.
struct ScheduleFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Uot floor_mod(Uot a, Uot m) {
    Uot r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace cranring
