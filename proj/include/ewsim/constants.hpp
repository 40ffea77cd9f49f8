#pragma once

// SI values. h and k_B are the 2019 exact definitions; g is the conventional
// laboratory value used throughout, not the local gravimeter value.
namespace ewsim::constants {

inline constexpr double h = 6.62607015e-34;        // J s
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double k_B = 1.380649e-23;        // J/K
inline constexpr double g_earth = 9.81;            // m/s^2

}  // namespace ewsim::constants
