// SPDX-License-Identifier: Apache-2.0
#ifndef NRANGE_COMMON_HPP
#define NRANGE_COMMON_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nrange {

using cd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

inline constexpr const char* kVersion = "0.1.0";

struct InvalidMatrixError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct UnsupportedDimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateBodyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nrange

#endif
