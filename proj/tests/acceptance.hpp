// Acceptance suite shared by the `acceptance_tests` binary and the CLI
// `selftest` subcommand. Each criterion prints one PASS / FAIL line.
#pragma once

#include <iosfwd>

namespace mbrlab_acceptance {

enum class Scope { quick, full };

inline constexpr int kNumCriteria = 12;

// Returns true when the criterion holds at its stated tolerance.
bool run_criterion(int index, std::ostream& os);

// Runs the quick subset or all criteria; true when every line passed.
bool run_suite(Scope scope, std::ostream& os);

} // namespace mbrlab_acceptance
