#ifndef MEVC_ERRORS_HPP
#define MEVC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mevc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Guess or check invoked on a state outside its invariant.
struct InvariantViolated : Error {
  using Error::Error;
};

// Tight-state calculus needs vmin > 0; vmin = 0 has no tight state.
struct DegenerateTx : Error {
  using Error::Error;
};

// move_to_state target is off the current constant-product curve.
struct ProductMismatch : Error {
  using Error::Error;
};

// Oracle-backed guess could not exhaust its grid within budget.
struct OracleDiverged : Error {
  using Error::Error;
};

// MEVsup gain sequence decreased across the x schedule.
struct NotConverging : Error {
  using Error::Error;
};

// Scenario file failed to parse or validate; the message carries the
// offending field's path.
struct ScenarioError : Error {
  using Error::Error;
};

}  // namespace mevc

#endif
