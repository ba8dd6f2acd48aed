#ifndef RICN_SPECTRAL_HPP
#define RICN_SPECTRAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "ricn/weighted.hpp"

namespace ricn {

/// Uniform symmetric grid on [-L, L] with an odd number of nodes, so x = 0
/// is always a node.
struct Grid1D {
  double half_width = 0.0; // L
  int node_count = 0;      // M, odd, >= 3
  double spacing = 0.0;    // h = 2L/(M-1)
  std::vector<double> nodes;

  static Grid1D make(double L, int M);
};

/// Finite-volume discretization of -Delta_m on [-L, L] with reflecting
/// (zero-flux) ends: a symmetric tridiagonal stiffness matrix A with
/// A 1 = 0 exactly, and a positive diagonal (lumped) mass matrix B.
/// Generalized eigenvalue problem: A v = lambda B v.
struct DiscreteOperator {
  Grid1D grid;
  std::vector<double> stiff_diag; // A_ii
  std::vector<double> stiff_off;  // A_{i,i+1} (size M-1), nonpositive
  std::vector<double> mass;       // B_ii, positive
  std::string boundary = "reflecting";
};

/// Assembles the operator from the weight of a 1-D manifold with unit
/// metric: midpoint fluxes w_{i+1/2} = exp(-psi(midpoint)), node masses
/// B_ii = h exp(-psi(x_i)) with half weight at the two ends.
DiscreteOperator discretize(const WeightedManifold& wm, double L, int M);

/// Eigenpairs of (A, B), smallest first.
struct SpectralResult {
  std::vector<double> eigenvalues;             // ascending
  std::vector<std::vector<double>> eigenvectors; // B-orthonormal
  std::vector<double> residuals;               // ||A v - lambda B v|| / ||B v||
  Grid1D grid;
  std::optional<double> richardson_lambda1;    // filled by two-grid drivers
  int bisection_steps = 0;
};

/// k smallest eigenpairs by symmetrizing with B^{1/2} into a standard
/// symmetric tridiagonal problem solved with Sturm-sequence bisection and
/// inverse iteration. Residuals exceeding 1e-8 relative raise NumericError.
SpectralResult eigen_smallest(const DiscreteOperator& op, int k);

/// First nonzero eigenvalue with a coarse/fine Richardson extrapolation,
/// the sign-normalized eigenfunction, and the margin over the model's
/// spectral-gap bound when (K, N) labels are available.
struct FirstEigenResult {
  double lambda1 = 0.0;
  double richardson_lambda1 = 0.0;
  std::optional<double> bound;        // KN/(N-1) from labels
  std::optional<double> bound_margin; // lambda1 - bound
  Grid1D grid;
  std::vector<double> eigenfunction;  // on grid.nodes, B-normalized
  double lambda0 = 0.0;
  bool gap_claim_valid = true;        // false: infinite volume detected
  std::string gap_claim_note;
  SpectralResult fine;
};

FirstEigenResult first_nonzero_eigenvalue(const WeightedManifold& wm, double L,
                                          int M);

/// Truncation half-width that captures all but ~1e-10 of the total mass,
/// found by doubling; `finite` is false when the mass keeps growing
/// (infinite-volume densities).
struct Truncation {
  double half_width;
  bool finite;
  double mass;
};
Truncation default_truncation(const WeightedManifold& wm, double initial = 4.0,
                              double cap = 512.0);

/// Truncated squared-norm diagnostics int_{-L}^{L} u^2 exp(-psi) dx over an
/// increasing schedule of half-widths; classifies the candidate as
/// convergent (increments decay) or divergent (last ratio above
/// 1 + kDivergenceDelta).
enum class L2Class { Convergent, Divergent };

struct L2Diagnostic {
  L2Class classification;
  std::vector<double> half_widths;
  std::vector<double> partial_norms;
  double last_ratio = 1.0;
};

inline constexpr double kDivergenceDelta = 0.05;

L2Diagnostic l2_membership_diagnostic(const WeightedManifold& wm,
                                      const ScalarField& u,
                                      const std::vector<double>& schedule);

} // namespace ricn

#endif
