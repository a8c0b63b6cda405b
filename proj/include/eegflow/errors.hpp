#pragma once

#include <stdexcept>
#include <string>

namespace eegflow {

/// Base class for all library errors. Subclasses name the failure mode;
/// the CLI maps them onto exit codes (config=2, data=3, numeric=4).
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- data / parsing ---------------------------------------------------------

class FieldCountError : public Error {
public:
  FieldCountError(std::size_t line_no, std::size_t got, std::size_t want)
      : Error("line " + std::to_string(line_no) + ": expected >= " +
              std::to_string(want) + " tab-separated fields, got " +
              std::to_string(got)),
        line_no(line_no) {}
  std::size_t line_no;
};

class NumericParseError : public Error {
public:
  NumericParseError(std::size_t line_no, const std::string& token)
      : Error("line " + std::to_string(line_no) + ": malformed numeric '" +
              token + "'"),
        line_no(line_no) {}
  std::size_t line_no;
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

class OrderMismatchError : public Error {
public:
  explicit OrderMismatchError(const std::string& what) : Error(what) {}
};

// --- numerics ---------------------------------------------------------------

class ZeroSignalError : public Error {
public:
  explicit ZeroSignalError(const std::string& what = "zero-RMS signal")
      : Error(what) {}
};

class ZeroVarianceError : public Error {
public:
  explicit ZeroVarianceError(const std::string& what = "zero-variance input")
      : Error(what) {}
};

class OddLengthError : public Error {
public:
  explicit OddLengthError(std::size_t n)
      : Error("spectrum input length must be even and >= 2, got " +
              std::to_string(n)) {}
};

class AsymmetryError : public Error {
public:
  explicit AsymmetryError(const std::string& what) : Error(what) {}
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::size_t iterations,
                   double residual)
      : Error(what + " (iterations=" + std::to_string(iterations) +
              ", residual=" + std::to_string(residual) + ")"),
        iterations(iterations), residual(residual) {}
  std::size_t iterations;
  double residual;
};

class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& what) : Error(what) {}
};

// --- graphs / transport -----------------------------------------------------

class IsolatedNodeError : public Error {
public:
  explicit IsolatedNodeError(std::size_t node)
      : Error("node " + std::to_string(node) + " has no present neighbor") {}
};

class InfeasibleError : public Error {
public:
  explicit InfeasibleError(const std::string& what) : Error(what) {}
};

class DegenerateEdgeError : public Error {
public:
  DegenerateEdgeError(std::size_t u, std::size_t v, double d)
      : Error("edge (" + std::to_string(u) + "," + std::to_string(v) +
              ") has degenerate length " + std::to_string(d)) {}
};

// --- training / evaluation --------------------------------------------------

class DivergenceError : public Error {
public:
  explicit DivergenceError(const std::string& what) : Error(what) {}
};

class SingleClassError : public Error {
public:
  explicit SingleClassError(const std::string& what =
                                "labels contain a single class")
      : Error(what) {}
};

class BandRangeError : public Error {
public:
  explicit BandRangeError(const std::string& what) : Error(what) {}
};

} // namespace eegflow
