#ifndef RICN_WEIGHTED_HPP
#define RICN_WEIGHTED_HPP

#include <optional>
#include <string>
#include <vector>

#include "ricn/geometry.hpp"

namespace ricn {

/// Effective dimension parameter N of the weighted Ricci tensor: a finite
/// value in (-inf, 0) or [n, +inf), or the distinguished infinity marker.
/// Values in [0, n) are inadmissible and rejected.
class EffectiveDim {
public:
  /// Finite N, validated against the chart dimension `dim`.
  static EffectiveDim finite(double value, int dim);
  /// Finite N validated later, against the manifold it is used with.
  static EffectiveDim finite_unchecked(double value);
  static EffectiveDim infinity();

  /// Parses "inf"/"infinity" or a number (CLI entry point).
  static EffectiveDim parse(const std::string& text, int dim);

  bool is_infinite() const { return infinite_; }
  double value() const;

  /// Throws InvalidArgument when a finite value lies in [0, dim).
  void require_admissible(int dim) const;

  std::string to_string() const;

private:
  EffectiveDim(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Extended real used for directional curvature: either a finite value or
/// the -infinity marker of the N = n branch. The marker is a tag, never a
/// floating-point infinity, so it cannot contaminate arithmetic.
class ExtReal {
public:
  static ExtReal finite(double v) { return ExtReal(v, false); }
  static ExtReal neg_infinity() { return ExtReal(0.0, true); }

  bool is_neg_infinity() const { return neg_inf_; }
  double value() const {
    if (neg_inf_) throw InvalidArgument("value() on the -infinity marker");
    return value_;
  }
  std::string to_string() const {
    return neg_inf_ ? "-inf" : format_g17(value_);
  }

private:
  ExtReal(double v, bool ninf) : value_(v), neg_inf_(ninf) {}
  double value_ = 0.0;
  bool neg_inf_ = false;
};

/// Optional metadata describing how a manifold was constructed; carried so
/// spectral and concentration routines can look up (K, N) targets, decay
/// rates and volume finiteness without re-deriving them.
struct ModelLabels {
  std::string family; // "m1", "m2", "gauss", "sphere", "circle", ...
  std::optional<double> curvature_k;
  std::optional<double> effective_dim;
  std::optional<double> radius;
  std::optional<double> slope;
  std::optional<bool> finite_volume;
  std::optional<double> decay_rate; // exponential decay rate of the density
};

/// A chart plus a weight function psi; the reference measure is
/// exp(-psi) * sqrt(det g) in chart coordinates.
class WeightedManifold {
public:
  WeightedManifold() = default;
  WeightedManifold(Chart chart, ScalarField psi, ModelLabels labels = {});

  const Chart& chart() const { return chart_; }
  const ScalarField& psi() const { return psi_; }
  const ModelLabels& labels() const { return labels_; }
  int dim() const { return chart_.dim(); }

  /// Measure density exp(-psi(p)) sqrt(det g(p)); finite and positive, else
  /// NumericError.
  double density(const Vec& p) const;

private:
  Chart chart_;
  ScalarField psi_;
  ModelLabels labels_;
};

/// The weighted Ricci tensor at p as a bilinear form:
///   Ric_g + Hess psi - (dpsi (x) dpsi) / (N - n)    for finite N != n,
///   Ric_g + Hess psi                                for N = infinity.
/// N = n is directional-only and rejected here (see ric_n_direction).
BilinearForm ric_n_form(const WeightedManifold& wm, const Vec& p,
                        const EffectiveDim& n_eff);

/// Directional weighted Ricci curvature Ric_N(v) (v need not be unit; the
/// quadratic form gives the c^2 scaling automatically). For N = n the value
/// is Ric_g(v,v) + Hess psi(v,v) when v is g-orthogonal to grad psi within
/// the relative tolerance kOrthogonalityTol, and the -infinity marker
/// otherwise.
ExtReal ric_n_direction(const WeightedManifold& wm, const Vec& p, const Vec& v,
                        const EffectiveDim& n_eff);

inline constexpr double kOrthogonalityTol = 1e-10;

/// Smallest lambda with det(Ric_N - lambda g) = 0 together with a g-unit
/// direction attaining it (the pointwise minimum of Ric_N over unit
/// vectors).
struct DirectionalMin {
  double value;
  Vec direction;
};
DirectionalMin ric_n_min(const WeightedManifold& wm, const Vec& p,
                         const EffectiveDim& n_eff);

/// Weighted (Witten) Laplacian: Delta u - <grad u, grad psi>.
double weighted_laplacian(const WeightedManifold& wm, const ScalarField& u,
                          const Vec& p);

/// Per-point curvature data over a sweep of points.
struct CurvatureReport {
  struct Entry {
    Vec point;
    Mat form;
    double min_value;
    Vec min_direction;
  };
  std::vector<Entry> entries;
  double summary_min = 0.0;
  double summary_max = 0.0;
};

CurvatureReport curvature_report(const WeightedManifold& wm,
                                 const std::vector<Vec>& points,
                                 const EffectiveDim& n_eff, unsigned jobs = 1);

// --- model space catalog ----------------------------------------------------

namespace models {

/// Real line with density cosh(sqrt(K/(1-N)) x)^(N-1) dx; finite volume,
/// constant weighted Ricci curvature K. Requires K > 0, N < 0.
WeightedManifold m1(double K, double N);

/// Real line with density exp(-sqrt(K(1-N)) x) dx; infinite volume, constant
/// weighted Ricci curvature K. Requires K > 0, N < 0.
WeightedManifold m2(double K, double N);

/// Real line with Gaussian density exp(-K x^2 / 2) dx. Requires K > 0.
WeightedManifold gauss_line(double K);

/// Upper half-plane with metric (dx^2 + dy^2)/y^2 and weight
/// psi = -(2-N) log y; constant weighted Ricci curvature 1-N. Requires N < 0.
WeightedManifold hyperbolic_example(double N);

/// Round sphere of the given radius in polar coordinates (theta, phi),
/// unweighted. g = diag(r^2, r^2 sin^2 theta).
WeightedManifold sphere(double radius);

/// Circle of the given radius as a 1-D periodic chart, unweighted.
WeightedManifold circle(double radius);

/// Flat R^n with weight psi = slope * (x1 + ... + xn); the product space
/// whose weighted Ricci curvature is only nonnegative. n in {1, 2, 3}.
WeightedManifold flat_product(int n, double slope);

/// Euclidean line with a custom weight expression over "x".
WeightedManifold custom_line(const std::string& weight_text, ModelLabels labels = {});

/// Tag-based lookup used by the CLI: m1, m2, gauss, hyperbolic-example,
/// sphere, circle, flat-product.
struct ModelParams {
  std::optional<double> K;
  std::optional<double> N;
  std::optional<double> radius;
  std::optional<double> slope;
  std::optional<int> dim;
};
WeightedManifold by_tag(const std::string& tag, const ModelParams& params);

} // namespace models

// --- warped products ---------------------------------------------------------

/// 2-D warped product over a 1-D weighted base: coordinates (t, x), metric
/// dt^2 + cosh^2(a t) g_sigma with a = sqrt(K/(1-N)), and weight
/// psi(t, x) = (2-N) log cosh(a t) + psi_sigma(x), so the measure splits as
/// cosh(a t)^(N-1) dt m_sigma(dx). Requires K > 0 and N < -1.
struct WarpedProduct {
  WeightedManifold manifold;
  WeightedManifold base;
  double curvature_k;
  double effective_dim;
  double warp_rate; // a = sqrt(K/(1-N))
};

WarpedProduct warped_product(const WeightedManifold& sigma, double K, double N);

/// Evaluates Ric_{N-1} of the warped product's base at the given points and
/// reports the margin against the threshold K(2-N)/(1-N). A negative margin
/// means the base fails the inherited curvature bound (reported, not an
/// error).
struct SigmaCurvatureReport {
  double threshold;
  struct Entry {
    double x;
    double ric_n_minus_1;
    double margin;
  };
  std::vector<Entry> entries;
  double min_margin = 0.0;
};

SigmaCurvatureReport sigma_curvature_check(const WarpedProduct& warped,
                                           const std::vector<double>& points);

} // namespace ricn

#endif
