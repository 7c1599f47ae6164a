#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sinex {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad flag value, bad dims, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

/// Expression is not affine in the requested state variables.
struct NonAffineError : Error {
  using Error::Error;
};

/// Expression references a symbol that is neither a constant nor a state variable.
struct UnboundSymbolError : Error {
  using Error::Error;
};

/// Simulink block has a nonzero sample time; only continuous-time blocks translate.
struct NonZeroSampleTimeError : Error {
  using Error::Error;
};

/// Sample-based sine semantics have no ODE encoding.
struct SampleBasedUnsupportedError : Error {
  using Error::Error;
};

/// A model failed validation where a valid model is required.
struct InvalidModelError : Error {
  using Error::Error;
};

/// Input is not well-formed XML.
struct MalformedXmlError : Error {
  using Error::Error;
};

/// XML is well-formed but the root element is not an sspaceex document.
struct UnsupportedSchemaError : Error {
  using Error::Error;
};

/// A GEN-format line is neither blank nor two finite numbers.
struct GenParseError : Error {
  GenParseError(std::size_t line_number, const std::string& what)
      : Error("line " + std::to_string(line_number) + ": " + what), line(line_number) {}
  std::size_t line;
};

/// Requested discretization step exceeds the matrix-exponential trust region.
struct StepTooLargeError : Error {
  using Error::Error;
};

/// Numerical integration produced a non-finite state.
struct NonFiniteError : Error {
  using Error::Error;
};

}  // namespace sinex
