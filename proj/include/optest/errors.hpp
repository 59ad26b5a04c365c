#pragma once

#include <stdexcept>

namespace optest {

// Error taxonomy shared across the library. The CLI maps each type to a
// distinct exit code (see tools/ and README).

// Asked to condition on (or forecast after) a history with probability zero.
struct ConditioningOnNullEvent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exhaustive enumeration would exceed the per-level state budget.
struct EnumerationTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A kernel keeps at least epsilon mass on one path beyond the depth budget,
// so no cylinder split (or reference-path stopping time) exists.
struct AtomDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative solver exhausted its budget before reaching the requested gap.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rejection region contains a cylinder deeper than the game horizon.
struct RegionDeeperThanHorizon : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Membership of a history in a rejection region is not yet decided at the
// history's length.
struct UndecidedMembership : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario configuration failed validation; the message names the field.
struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace optest
