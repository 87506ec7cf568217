#pragma once

#include <stdexcept>
#include <string>

namespace pising {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph admits no planar embedding.
struct NonPlanarError : Error {
  using Error::Error;
};

// Requested edge is not present in the graph.
struct MissingEdgeError : Error {
  using Error::Error;
};

// Operation requires a zero-field model but node parameters are nonzero.
struct NonZeroFieldError : Error {
  using Error::Error;
};

// Embedding does not match the model's graph.
struct EmbeddingMismatchError : Error {
  using Error::Error;
};

// Determinant or residue checks failed in the Kac-Ward linear algebra.
struct NumericalError : Error {
  using Error::Error;
};

// Problem exceeds the brute-force enumeration limit.
struct TooLargeError : Error {
  using Error::Error;
};

// Moment triple does not correspond to a probability table.
struct NotRealizableError : Error {
  using Error::Error;
};

// Target distribution puts mass where the model has none.
struct InfiniteDivergenceError : Error {
  using Error::Error;
};

// Data value outside the expected domain (e.g. non ±1 sample entry).
struct BadValueError : Error {
  using Error::Error;
};

// Invalid generator dimensions.
struct BadDimsError : Error {
  using Error::Error;
};

// Target moments unusable for learning (|mu| > 1, wrong size, ...).
struct InvalidTargetsError : Error {
  using Error::Error;
};

}  // namespace pising
