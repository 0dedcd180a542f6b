#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rotchain/types.hpp"

namespace rotchain {

/// Dead band below which u' samples carry no sign information.
inline constexpr double kModeDeadBand = 1e-9;

/// Rotation mode of a converged shape from its u'(s_bar) samples.
///
/// The mode is the number of interior axis crossings plus one: a crossing is
/// a sign change of u' between samples whose magnitude exceeds the dead band
/// on both sides, strictly inside (0, L_bar). A shape whose u' never leaves
/// the dead band is the straight rest shape and counts as mode 1.
inline int classify_mode(std::span<const double> u_prime) {
    if (u_prime.size() < 10)
        throw InvalidArgument("mode classification needs at least 10 samples");

    // A sign change between two above-band samples locates a crossing strictly
    // between them, hence strictly inside (0, L_bar). u'(0) = 0 sits inside the
    // dead band and never participates.
    int crossings = 0;
    double prev   = 0.0;
    bool have_prev = false;
    for (const double v : u_prime) {
        if (std::abs(v) <= kModeDeadBand) continue;
        if (have_prev && ((prev < 0.0) != (v < 0.0))) ++crossings;
        prev      = v;
        have_prev = true;
    }
    return crossings + 1;  // rest shape (no sample above band) falls through to 1
}

inline int classify_mode(const std::vector<double>& u_prime) {
    return classify_mode(std::span<const double>(u_prime));
}

}  // namespace rotchain
