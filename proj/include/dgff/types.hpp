#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dgff {

using Complex = std::complex<double>;
using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using FaceId = std::int32_t;

inline constexpr VertexId kNoVertex = -1;
inline constexpr FaceId kNoFace = -1;
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Numerical failure (singular system, non-convergent refinement).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dgff
