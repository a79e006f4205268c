#pragma once

#include <stdexcept>
#include <string>

namespace trajsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration and input-file problems (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public ConfigError {
 public:
  SchemaError(std::string key_path, const std::string& what)
      : ConfigError("schema error at '" + key_path + "': " + what), key_path_(std::move(key_path)) {}
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

class UnitsError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class LatticeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DegenerateSet : public Error {
 public:
  using Error::Error;
};

class HorizonMismatch : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// No step size satisfies the feasibility assumption at some slot (CLI exit code 3).
/// slot() is 0 until the engine attaches the slot index.
class InfeasibleStepSize : public Error {
 public:
  explicit InfeasibleStepSize(const std::string& what, int slot = 0) : Error(what), slot_(slot) {}
  int slot() const { return slot_; }
  void set_slot(int slot) { slot_ = slot; }

 private:
  int slot_;
};

class EmptyStepInterval : public InfeasibleStepSize {
 public:
  EmptyStepInterval(double lower, double candidate, double upper);
  double lower() const { return lower_; }
  double candidate() const { return candidate_; }
  double upper() const { return upper_; }

 private:
  double lower_, candidate_, upper_;
};

class RootExistence : public InfeasibleStepSize {
 public:
  RootExistence(double alpha, double required);
  double alpha() const { return alpha_; }
  double required() const { return required_; }

 private:
  double alpha_, required_;
};

/// Iterative solver stopped before reaching its tolerance (CLI exit code 4).
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// CLI exit code for an exception: 2 config, 3 infeasible step, 4 no convergence, 1 otherwise.
int exit_code_for(const std::exception& e);

}  // namespace trajsim
