#pragma once

#include <cmath>

#include "dfe/fft.hpp"

namespace dfe::detail {

/// Wrap an angle into [-pi, pi).
inline double wrap_to_pi(double a) {
    double r = std::remainder(a, kTwoPi);
    if (r >= kPi) r -= kTwoPi;
    if (r < -kPi) r += kTwoPi;
    return r;
}

} // namespace dfe::detail
