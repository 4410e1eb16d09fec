#pragma once

#include <stdexcept>
#include <string>

namespace trx {

/// Base class for every error raised by the library. The `code()` string is
/// the stable identifier written into reports.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// A point handed to the nearest-point projection lies outside the tube.
struct OutOfTube : Error {
  explicit OutOfTube(const std::string& what) : Error("OutOfTube", what) {}
};

/// A defining map of a level set lost rank at a probed point.
struct RankDrop : Error {
  explicit RankDrop(const std::string& what) : Error("RankDrop", what) {}
};

struct IncompatibleFaces : Error {
  explicit IncompatibleFaces(const std::string& what) : Error("IncompatibleFaces", what) {}
};

struct ToleranceUnreachable : Error {
  explicit ToleranceUnreachable(const std::string& what)
      : Error("ToleranceUnreachable", what) {}
};

struct TrialsExhausted : Error {
  explicit TrialsExhausted(const std::string& what) : Error("TrialsExhausted", what) {}
};

struct NotTransverse : Error {
  explicit NotTransverse(const std::string& what) : Error("NotTransverse", what) {}
};

struct NearSingularSign : Error {
  explicit NearSingularSign(const std::string& what) : Error("NearSingularSign", what) {}
};

/// Malformed configuration or inconsistent dimensions.
struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error("SchemaError", what) {}
};

}  // namespace trx
