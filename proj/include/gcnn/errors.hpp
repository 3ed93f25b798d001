#pragma once

#include <stdexcept>
#include <string>

namespace gcnn {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimension or index mismatch between operands.
struct ShapeError : Error {
    using Error::Error;
};

// Argument outside its mathematical domain (probabilities, ratios, degrees,
// directed input to an undirected-only op, degenerate sizes).
struct DomainError : Error {
    using Error::Error;
};

// NaN/Inf after an op, eigensolver non-convergence, degenerate or
// ill-conditioned spectra.
struct NumericError : Error {
    using Error::Error;
};

// Malformed input file; message names the file and, where known, the line.
struct ParseError : Error {
    using Error::Error;
};

// Invalid experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace gcnn
