#pragma once

#include <stdexcept>
#include <string>

namespace funcmark {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad parameters, malformed files, degenerate meshes.
struct InvalidArgumentError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct InvalidMeshError : Error { using Error::Error; };

// Query outside a grid field's bounding box.
struct OutOfDomainError : Error { using Error::Error; };

// Direction-dependent quantities queried at the origin / on the z-axis.
struct UndefinedDirectionError : Error { using Error::Error; };
struct SingularDirectionError : Error { using Error::Error; };

// Numerical failures.
struct NonConvergenceError : Error {
    NonConvergenceError(const std::string& msg, double residual)
        : Error(msg), best_residual(residual) {}
    double best_residual;
};
struct SingularJacobianError : Error { using Error::Error; };
struct EmptySurfaceError : Error { using Error::Error; };
struct SamplingExhaustedError : Error { using Error::Error; };

// Verification failures.
struct UndecodableMessageError : Error { using Error::Error; };
struct AlignmentFailedError : Error {
    AlignmentFailedError(const std::string& msg, double residual)
        : Error(msg), mean_abs_field(residual) {}
    double mean_abs_field;
};

}  // namespace funcmark
