#ifndef RICN_VERIFY_HPP
#define RICN_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ricn {

/// One verification check: an expected/got pair at a pinned tolerance.
struct CheckResult {
  std::string id;       // stable identifier, "C1".."C16"
  std::string name;
  std::string expected; // human-readable target
  std::string got;      // worst observed value
  double tolerance = 0.0;
  bool passed = false;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 20240814; // drives every randomized sweep
  unsigned jobs = 0;             // 0 = all cores
};

/// Runs one named suite. Suites: "curvature", "spectral", "bochner",
/// "concentration", "warped", "hyperbolic", or "all" (every check, ordered
/// by id). Unknown names throw InvalidArgument.
std::vector<CheckResult> verify_suite(const std::string& suite,
                                      const VerifyOptions& options = {});

/// The suite names accepted by verify_suite, in display order.
const std::vector<std::string>& verify_suite_names();

/// Formats results as the fixed-width table printed by the CLI.
std::string format_check_table(const std::vector<CheckResult>& results);

} // namespace ricn

#endif
