#ifndef BOSEGAS_ERRORS_HPP
#define BOSEGAS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace bosegas {

// Base of everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments or requests outside a formula's domain of validity.
// The command line maps this family to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Iterative schemes that failed to reach their tolerance. Exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent on-disk artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

struct MissingParameter : ValidationError { using ValidationError::ValidationError; };
struct NonPositiveInput : ValidationError { using ValidationError::ValidationError; };
struct InvalidDimension : ValidationError { using ValidationError::ValidationError; };
struct NonPositiveRadius : ValidationError { using ValidationError::ValidationError; };
struct NonNegativeEnergy : ValidationError { using ValidationError::ValidationError; };
struct ZeroFrequency : ValidationError { using ValidationError::ValidationError; };
struct DensityAboveCritical : ValidationError { using ValidationError::ValidationError; };
struct BelowCritical : ValidationError { using ValidationError::ValidationError; };
struct WrongDisorderClass : ValidationError { using ValidationError::ValidationError; };
struct DivergentInOneDimension : ValidationError { using ValidationError::ValidationError; };
struct NonPositiveTemperature : ValidationError { using ValidationError::ValidationError; };
struct GammaNotAboveOne : ValidationError { using ValidationError::ValidationError; };
struct OutsideOneDimension : ValidationError { using ValidationError::ValidationError; };
struct MissingTrap : ValidationError { using ValidationError::ValidationError; };
using NoTrap = MissingTrap;
struct ShapeMismatch : ValidationError { using ValidationError::ValidationError; };
struct GridTooCoarse : ValidationError { using ValidationError::ValidationError; };
struct EnsembleTooSmall : ValidationError { using ValidationError::ValidationError; };
using InsufficientEnsemble = EnsembleTooSmall;
struct WindowTooNarrow : ValidationError { using ValidationError::ValidationError; };
struct InsufficientSweep : ValidationError { using ValidationError::ValidationError; };
struct UnnormalizedInput : ValidationError { using ValidationError::ValidationError; };
struct ConfigError : ValidationError { using ValidationError::ValidationError; };
struct UnknownUnit : ValidationError { using ValidationError::ValidationError; };

struct NoConvergence : NumericalError { using NumericalError::NumericalError; };
struct StepUnstable : NumericalError { using NumericalError::NumericalError; };

struct CorruptHeader : IoError { using IoError::IoError; };
struct VersionMismatch : IoError { using IoError::IoError; };

// Non-fatal notes attached to results when inputs drift toward the edge of a
// formula's validity window. Guarded quantities are still computed; callers
// decide whether to trust them.
struct Warning {
    std::string code;
    std::string message;
};
using Warnings = std::vector<Warning>;

} // namespace bosegas

#endif
