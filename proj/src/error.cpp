// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include "steklov/error.hpp"

namespace steklov
{

const char *ErrorCodeName(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::UnknownDomain:
      return "UnknownDomain";
    case ErrorCode::LevelOverCap:
      return "LevelOverCap";
    case ErrorCode::DegenerateElement:
      return "DegenerateElement";
    case ErrorCode::InvalidRefractionIndex:
      return "InvalidRefractionIndex";
    case ErrorCode::NearNeumannEigenvalue:
      return "NearNeumannEigenvalue";
    case ErrorCode::SolveFailedOnContour:
      return "SolveFailedOnContour";
    case ErrorCode::MaxDepthExceeded:
      return "MaxDepthExceeded";
    case ErrorCode::RegionContainsOrigin:
      return "RegionContainsOrigin";
    case ErrorCode::NoConvergence:
      return "NoConvergence";
    case ErrorCode::ArgumentOutOfRange:
      return "ArgumentOutOfRange";
    case ErrorCode::DenominatorNearZero:
      return "DenominatorNearZero";
    case ErrorCode::InsufficientLevels:
      return "InsufficientLevels";
    case ErrorCode::IoError:
      return "IoError";
    case ErrorCode::Internal:
      return "Internal";
  }
  return "Unknown";
}

}  // namespace steklov
