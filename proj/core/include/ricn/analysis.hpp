#ifndef RICN_ANALYSIS_HPP
#define RICN_ANALYSIS_HPP

#include <optional>
#include <vector>

#include "ricn/weighted.hpp"

namespace ricn {

/// Pointwise Bochner data for a scalar field u:
///   lhs    = Delta_m(|grad u|^2 / 2) - <grad Delta_m u, grad u>
///   rhs_N  = Ric_N(grad u) + (Delta_m u)^2 / N
///   rhs_inf= Ric_inf(grad u) + ||Hess u||_HS^2
/// The identity gap (lhs - rhs_inf) vanishes for every smooth u; the
/// inequality gap (lhs - rhs_N) is nonnegative and decomposes as
///   gap_N = (||Hess u||^2 - (Delta u)^2/n)
///         + N(N-n)/n (p/N + q/(N-n))^2,  p = Delta_m u, q = <grad u, grad psi>,
/// which is also reported for finite N != n.
struct BochnerReport {
  Vec point;
  double lhs = 0.0;
  double rhs_inf = 0.0;
  ExtReal rhs_n = ExtReal::finite(0.0);
  double gap_inf = 0.0;           // lhs - rhs_inf (identity residual)
  ExtReal gap_n = ExtReal::finite(0.0); // lhs - rhs_N; +inf never occurs, -inf marker when rhs_n is
  double hessian_hs_sq = 0.0;
  double laplacian = 0.0;          // unweighted Delta u
  double weighted_laplacian = 0.0; // p
  double grad_psi_inner = 0.0;     // q
  std::optional<double> trace_deficit; // ||Hess u||^2 - (Delta u)^2 / n
  std::optional<double> quadratic_slack; // N(N-n)/n (p/N + q/(N-n))^2
};

/// Finite-difference step for the outer differentiation of composite fields
/// (|grad u|^2/2 and Delta_m u); fourth-order stencils at this step keep the
/// identity residual near the 1e-4 noise floor of fourth derivatives.
inline constexpr double kCompositeFdStep = 1e-3;

BochnerReport bochner_report(const WeightedManifold& wm, const ScalarField& u,
                             const Vec& p, const EffectiveDim& n_eff);

/// Residual of the Bochner-Weitzenboeck identity (lhs - rhs_inf); ~0 for
/// every smooth u.
double bw_residual(const WeightedManifold& wm, const ScalarField& u, const Vec& p);

/// Gap of the Bochner inequality (lhs - rhs_N); >= 0 up to FD noise.
/// Throws InvalidArgument when the N = n branch hits the -infinity marker.
double bochner_gap(const WeightedManifold& wm, const ScalarField& u, const Vec& p,
                   const EffectiveDim& n_eff);

/// Lower bound for the first nonzero eigenvalue of -Delta_m under
/// Ric_N >= K: KN/(N-1) for finite N != 1, K for N = infinity.
double spectral_gap_bound(double K, const EffectiveDim& n_eff);

/// Base-space threshold K(2-N)/(1-N) inherited by the cross-section of the
/// warped product, and the spectral-gap bound it implies one dimension
/// down, which simplifies to K and improves on KN/(N-1). Requires N < -1.
struct ComposedBound {
  double sigma_threshold;
  double composed_lambda;
  bool improves; // composed_lambda > spectral_gap_bound(K, N)
};
ComposedBound sigma_composed_bound(double K, double N);

/// One evaluation point of the concentration profile: the half-line lower
/// estimate of the concentration function at radius r and the exponential
/// upper bound exp(-sqrt(KN/(N-1)) r / 3).
struct ConcentrationPoint {
  double r = 0.0;
  double half_line_alpha = 0.0;
  double bound = 1.0;
  bool exceeds_bound = false;
};

struct ConcentrationProfile {
  std::vector<ConcentrationPoint> points;
  double median = 0.0;
  double total_mass = 0.0; // before normalization
  double truncation = 0.0;
  bool any_exceeds = false;
};

/// Normalizes the (finite-volume) 1-D measure to a probability, locates the
/// median, and evaluates, for each r, the worst complement mass
/// 1 - m(B(A, r)) over the half-line family {A : m(A) >= 1/2}. These are
/// lower estimates of the true concentration function (the supremum over
/// all Borel sets is out of reach); estimate <= bound is the meaningful
/// necessary-condition check, and r = 0 gives exactly 1/2.
ConcentrationProfile concentration_profile(const WeightedManifold& wm,
                                           const std::vector<double>& r_values,
                                           std::optional<double> truncation = {});

/// Entropy-versus-Fisher-information deficit
///   deficit = int f log f dm - c int |grad f|^2 / f dm
/// on the truncated, normalized line, with c = (N-1)/(2KN) for finite N and
/// c = 1/(2K) at N = infinity. f is renormalized to int f dm = 1 (the factor
/// is reported). A positive deficit exhibits failure of the log-Sobolev
/// inequality at that constant.
struct LsiResult {
  double deficit = 0.0;
  double entropy = 0.0;
  double fisher = 0.0;
  double constant = 0.0;
  double normalization = 1.0; // factor applied to f
};

LsiResult lsi_deficit(const WeightedManifold& wm, const ScalarField& f, double K,
                      const EffectiveDim& n_eff,
                      std::optional<double> truncation = {});

/// Sweep of tilted exponentials f_beta ~ exp(beta x) over `count` betas in
/// (0, beta_max); beta_max defaults to the density's decay rate. Returns
/// (beta, deficit) pairs.
struct LsiSweepPoint {
  double beta;
  double deficit;
};
std::vector<LsiSweepPoint> lsi_tilt_sweep(const WeightedManifold& wm, double K,
                                          const EffectiveDim& n_eff,
                                          int count = 64,
                                          std::optional<double> beta_max = {},
                                          std::optional<double> truncation = {});

} // namespace ricn

#endif
