#pragma once

#include <stdexcept>
#include <string>

namespace shrinker {

enum class ErrorCode {
  InvalidMesh,
  NonManifoldEdge,
  OrientationConflict,
  DegenerateTriangle,
  OpenBoundary,
  ZeroNormal,
  ParseError,
  UnsupportedFeature,
  IllConditionedFit,
  MissingOrbitTags,
  NonDivisible,
  InvalidParams,
  GenusChanged,
  MeshQualityCollapse,
  MaxIterations,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry the 1-based line number of the offending input line
// (0 when the failure is not tied to a line, e.g. an empty file).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace shrinker
