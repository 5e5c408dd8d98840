#pragma once

#include <stdexcept>
#include <string>

namespace copyro {

// Base class for every error raised by the toolkit. Subcommands map these to
// exit code 1 (user/data errors); anything else is an internal error (2).
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define COPYRO_DEFINE_ERROR(NAME)                                    \
    class NAME : public Error {                                      \
      public:                                                        \
        explicit NAME(const std::string& msg) : Error(msg) {}        \
    }

// dataset
COPYRO_DEFINE_ERROR(MissingColumn);
COPYRO_DEFINE_ERROR(MalformedNumber);
COPYRO_DEFINE_ERROR(RangeViolation);
COPYRO_DEFINE_ERROR(EmptyDataset);
COPYRO_DEFINE_ERROR(MissingYields);

// featurize
COPYRO_DEFINE_ERROR(TooFewRows);
COPYRO_DEFINE_ERROR(DegenerateMatrix);
COPYRO_DEFINE_ERROR(DimensionMismatch);

// models
COPYRO_DEFINE_ERROR(NotPositiveDefinite);
COPYRO_DEFINE_ERROR(DivergedTraining);
COPYRO_DEFINE_ERROR(SolverNotConverged);

// evolve
COPYRO_DEFINE_ERROR(InvalidBounds);
COPYRO_DEFINE_ERROR(PipelineMismatch);

// evaluate
COPYRO_DEFINE_ERROR(InvalidK);
COPYRO_DEFINE_ERROR(LengthMismatch);
COPYRO_DEFINE_ERROR(ConstantTarget);
COPYRO_DEFINE_ERROR(FoldPlanMismatch);

// analyze
COPYRO_DEFINE_ERROR(ConstantInput);
COPYRO_DEFINE_ERROR(ZeroCarbon);
COPYRO_DEFINE_ERROR(InfeasibleFixedPoint);
COPYRO_DEFINE_ERROR(InvalidAxis);

// cli / config
COPYRO_DEFINE_ERROR(UnknownKey);
COPYRO_DEFINE_ERROR(ConfigTypeError);

#undef COPYRO_DEFINE_ERROR

}  // namespace copyro
