#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace opschwarz {

/// Invalid user input: bad grid sizes, inconsistent decomposition, malformed config.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure inside a numerical kernel (degenerate element, singular system, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The Schwarz iteration hit its sweep cap before meeting both tolerances.
class NonConvergenceError : public NumericalError {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> eps_abs,
                      std::vector<double> eps_rel)
      : NumericalError(what), eps_abs_(std::move(eps_abs)), eps_rel_(std::move(eps_rel)) {}

  const std::vector<double>& eps_abs_history() const { return eps_abs_; }
  const std::vector<double>& eps_rel_history() const { return eps_rel_; }

 private:
  std::vector<double> eps_abs_;
  std::vector<double> eps_rel_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opschwarz
