#ifndef RICN_BASE_HPP
#define RICN_BASE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ricn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class of all errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (expressions, configs). Carries a 0-based position
/// into the offending string where known, or npos.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), pos_(position) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

/// Evaluation outside the mathematical domain (log of a nonpositive value,
/// division by zero, a point too close to a chart boundary, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Structurally invalid request: inadmissible effective dimension, bad model
/// parameters, dimension mismatch.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Numerical failure: singular metric, non-finite intermediate, eigensolver
/// not converging.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Deterministic random source used by property sweeps and randomized
/// verification checks. The uniform mapping is implemented from raw 64-bit
/// draws so sequences are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Standard normal via Box-Muller.
  double normal();

private:
  // splitmix64
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Runs fn(i) for i in [0, count) on up to `jobs` threads (0 = all cores).
/// Work items must be independent; results should be written to
/// preallocated slots so the output order does not depend on scheduling.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& fn);

/// Shortest-faithful decimal formatting used across reports: 17 significant
/// digits round-trips every double exactly.
std::string format_g17(double x);

} // namespace ricn

#endif
