#include "trajsim/errors.hpp"

#include <sstream>

namespace trajsim {

namespace {

std::string interval_message(double lower, double candidate, double upper) {
  std::ostringstream os;
  os.precision(10);
  os << "step-size interval is empty: lower bound " << lower << ", candidate " << candidate
     << ", open upper bound " << upper;
  return os.str();
}

std::string root_message(double alpha, double required) {
  std::ostringstream os;
  os.precision(10);
  os << "no positive step-size root: alpha " << alpha << " must exceed |v_o|/v_max = " << required;
  return os.str();
}

}  // namespace

EmptyStepInterval::EmptyStepInterval(double lower, double candidate, double upper)
    : InfeasibleStepSize(interval_message(lower, candidate, upper)),
      lower_(lower),
      candidate_(candidate),
      upper_(upper) {}

RootExistence::RootExistence(double alpha, double required)
    : InfeasibleStepSize(root_message(alpha, required)), alpha_(alpha), required_(required) {}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const InfeasibleStepSize*>(&e)) return 3;
  if (dynamic_cast<const NoConvergence*>(&e)) return 4;
  return 1;
}

}  // namespace trajsim
