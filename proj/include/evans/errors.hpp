#pragma once

#include <stdexcept>
#include <string>

namespace evans {

// Base for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };

// linalg
struct RankError : Error { using Error::Error; };
struct EigenFailure : Error { using Error::Error; };
struct SpectralSeparationFailure : Error { using Error::Error; };

// continuation
struct ProjectionConditionError : Error { using Error::Error; };
struct ProjectionGapError : Error { using Error::Error; };

// ode
struct StepSizeUnderflow : Error { using Error::Error; };
struct NonFiniteState : Error { using Error::Error; };

// shooting
struct InitError : Error { using Error::Error; };
struct StiefelDrift : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };

// analysis
struct NearZeroOnContour : Error { using Error::Error; };
struct RefinementDepthExceeded : Error { using Error::Error; };
struct ImaginaryResidueError : Error { using Error::Error; };

}  // namespace evans
