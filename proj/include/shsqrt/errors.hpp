#pragma once

#include <stdexcept>
#include <string>

namespace shsqrt {

// Process exit codes used by the CLI. Library code throws the exception
// types below; the CLI maps them to these codes.
enum class ExitCode : int {
  Ok = 0,
  Internal = 1,
  Config = 2,
  Parse = 3,
  Structure = 4,
  NegativeRealEigenvalue = 5,
  Singular = 6,
  Convergence = 7,
  File = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ExitCode exit_code() const { return code_; }

 private:
  ExitCode code_;
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& msg) : Error(ExitCode::Internal, msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(ExitCode::Config, msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(ExitCode::Parse, msg) {}
};

struct FileError : Error {
  explicit FileError(const std::string& msg) : Error(ExitCode::File, msg) {}
};

struct StructureError : Error {
  explicit StructureError(const std::string& msg) : Error(ExitCode::Structure, msg) {}
};

struct NegativeRealEigenvalueError : Error {
  explicit NegativeRealEigenvalueError(const std::string& msg)
      : Error(ExitCode::NegativeRealEigenvalue, msg) {}
};

struct SingularMatrixError : Error {
  explicit SingularMatrixError(const std::string& msg)
      : Error(ExitCode::Singular, msg) {}
};

struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& msg)
      : Error(ExitCode::Convergence, msg) {}
};

// Raised when a Sylvester block system is singular although the branch
// choice should have made it nonsingular; indicates an internal
// inconsistency rather than bad user input.
struct SylvesterSingularError : Error {
  explicit SylvesterSingularError(const std::string& msg)
      : Error(ExitCode::Internal, msg) {}
};

struct InconsistentSystemError : Error {
  explicit InconsistentSystemError(const std::string& msg)
      : Error(ExitCode::Internal, msg) {}
};

struct TooManyBranchesError : Error {
  explicit TooManyBranchesError(const std::string& msg)
      : Error(ExitCode::Config, msg) {}
};

}  // namespace shsqrt
