// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_ERROR_HPP
#define STEKLOV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace steklov
{

// Numeric values are shared with the C API status codes in steklov.h.
enum class ErrorCode : int
{
  InvalidArgument = 1,
  UnknownDomain = 2,
  LevelOverCap = 3,
  DegenerateElement = 4,
  InvalidRefractionIndex = 5,
  NearNeumannEigenvalue = 6,
  SolveFailedOnContour = 7,
  MaxDepthExceeded = 8,
  RegionContainsOrigin = 9,
  NoConvergence = 10,
  ArgumentOutOfRange = 11,
  DenominatorNearZero = 12,
  InsufficientLevels = 13,
  IoError = 14,
  Internal = 15,
};

const char *ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what), code_(code)
  {
  }

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

}  // namespace steklov

#endif  // STEKLOV_ERROR_HPP
