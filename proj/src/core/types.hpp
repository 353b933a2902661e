#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>

namespace twpk {

using cplx = std::complex<double>;

// Small fixed-size vectors for box coordinates and momentum grid indices.
// Only the first D components are meaningful; the rest stay zero.
using Vec3 = std::array<double, 3>;
using Idx3 = std::array<int, 3>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline constexpr Vec3 kZeroVec{0.0, 0.0, 0.0};
inline constexpr Idx3 kZeroIdx{0, 0, 0};

} // namespace twpk
