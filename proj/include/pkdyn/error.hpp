#pragma once

#include <stdexcept>
#include <string>

namespace pkdyn {

// Base class for every library error so callers can catch the whole family.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidPoint : Error {
  explicit InvalidPoint(const std::string& m) : Error("InvalidPoint: " + m) {}
};

struct RangeError : Error {
  explicit RangeError(const std::string& m) : Error("RangeError: " + m) {}
};

struct IndeterminacyHit : Error {
  explicit IndeterminacyHit(const std::string& m)
      : Error("IndeterminacyHit: " + m) {}
};

struct ParameterError : Error {
  explicit ParameterError(const std::string& m)
      : Error("ParameterError: " + m) {}
};

struct SolverError : Error {
  explicit SolverError(const std::string& m) : Error("SolverError: " + m) {}
};

struct ResolutionError : Error {
  double suggested_h;
  ResolutionError(const std::string& m, double h)
      : Error("ResolutionError: " + m), suggested_h(h) {}
};

struct EmptyCloud : Error {
  explicit EmptyCloud(const std::string& m) : Error("EmptyCloud: " + m) {}
};

struct NullSeed : Error {
  explicit NullSeed(const std::string& m) : Error("NullSeed: " + m) {}
};

struct BadMeasure : Error {
  explicit BadMeasure(const std::string& m) : Error("BadMeasure: " + m) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("ConfigError: " + m) {}
};

}  // namespace pkdyn
