#ifndef ROCKGEN_ERRORS_HPP
#define ROCKGEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rockgen {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV / catalog ingestion
struct ParseError : Error { using Error::Error; };
struct MissingColumn : ParseError { using ParseError::ParseError; };
struct UnparseableCell : ParseError { using ParseError::ParseError; };
struct InvariantViolation : ParseError { using ParseError::ParseError; };
struct EmptyFile : ParseError { using ParseError::ParseError; };
struct ManifestParseError : ParseError { using ParseError::ParseError; };
struct DatasetFileMissing : Error { using Error::Error; };
struct CountMismatch : Error { using Error::Error; };

// Fitting
struct DegenerateSample : Error { using Error::Error; };
struct NonPositiveSample : Error { using Error::Error; };
struct NoViableCandidate : Error { using Error::Error; };

// Generation
struct RejectionOverflow : Error { using Error::Error; };

// Diffusion
struct StepOutOfRange : Error { using Error::Error; };

// Neural substrate / training
struct ShapeMismatch : Error { using Error::Error; };
struct NonFiniteGradient : Error { using Error::Error; };
struct DivergenceDetected : Error { using Error::Error; };
struct ProbabilityOutOfRange : Error { using Error::Error; };

// Metrics
struct EmptySample : Error { using Error::Error; };
struct ConstantInput : Error { using Error::Error; };
struct TooFewBins : Error { using Error::Error; };

}  // namespace rockgen

#endif
