#include "ricn/analysis.hpp"

#include <cmath>

#include "ricn/numerics.hpp"
#include "ricn/spectral.hpp"

namespace ricn {

namespace {

FdConfig composite_fd() {
  FdConfig fd;
  fd.step = kCompositeFdStep;
  fd.order = 4;
  fd.scale_step = false;
  return fd;
}

} // namespace

BochnerReport bochner_report(const WeightedManifold& wm, const ScalarField& u,
                             const Vec& p, const EffectiveDim& n_eff) {
  const Chart& chart = wm.chart();
  const int n = chart.dim();
  n_eff.require_admissible(n);

  // Composite fields, re-differentiated by fourth-order FD.
  const ScalarField energy = ScalarField::from_function(
      [&chart, &u](const Vec& q) {
        return 0.5 * gradient_norm_sq(chart, u, q);
      },
      composite_fd());
  const ScalarField witten = ScalarField::from_function(
      [&wm, &u](const Vec& q) { return weighted_laplacian(wm, u, q); },
      composite_fd());

  BochnerReport rep;
  rep.point = p;
  rep.lhs = weighted_laplacian(wm, energy, p) -
            gradient_inner(chart, witten, u, p);

  const Mat ginv = chart.inverse_metric(p);
  const Mat hess_u = hessian(chart, u, p);
  rep.hessian_hs_sq = hilbert_schmidt_sq(ginv, hess_u);
  rep.laplacian = (ginv * hess_u).trace();
  rep.weighted_laplacian = weighted_laplacian(wm, u, p);
  rep.grad_psi_inner = gradient_inner(chart, u, wm.psi(), p);

  const Vec grad_u = gradient_vector(chart, u, p);
  rep.rhs_inf = ric_n_direction(wm, p, grad_u, EffectiveDim::infinity()).value() +
                rep.hessian_hs_sq;
  rep.gap_inf = rep.lhs - rep.rhs_inf;

  const ExtReal ric_n = ric_n_direction(wm, p, grad_u, n_eff);
  if (ric_n.is_neg_infinity()) {
    rep.rhs_n = ExtReal::neg_infinity();
    rep.gap_n = ExtReal::neg_infinity(); // marker: inequality trivial/void here
  } else {
    double rhs = ric_n.value();
    if (!n_eff.is_infinite())
      rhs += rep.weighted_laplacian * rep.weighted_laplacian / n_eff.value();
    rep.rhs_n = ExtReal::finite(rhs);
    rep.gap_n = ExtReal::finite(rep.lhs - rhs);
  }

  if (!n_eff.is_infinite() && n_eff.value() != static_cast<double>(n)) {
    const double nv = n_eff.value();
    const double pterm = rep.weighted_laplacian;
    const double qterm = rep.grad_psi_inner;
    rep.trace_deficit = rep.hessian_hs_sq - rep.laplacian * rep.laplacian / n;
    const double combo = pterm / nv + qterm / (nv - n);
    rep.quadratic_slack = nv * (nv - n) / n * combo * combo;
  }
  return rep;
}

double bw_residual(const WeightedManifold& wm, const ScalarField& u, const Vec& p) {
  return bochner_report(wm, u, p, EffectiveDim::infinity()).gap_inf;
}

double bochner_gap(const WeightedManifold& wm, const ScalarField& u, const Vec& p,
                   const EffectiveDim& n_eff) {
  const BochnerReport rep = bochner_report(wm, u, p, n_eff);
  if (rep.gap_n.is_neg_infinity())
    throw InvalidArgument(
        "Bochner gap undefined: Ric_n(grad u) is the -infinity marker at this point");
  return rep.gap_n.value();
}

double spectral_gap_bound(double K, const EffectiveDim& n_eff) {
  if (!(K > 0.0)) throw InvalidArgument("spectral_gap_bound: K must be positive");
  if (n_eff.is_infinite()) return K;
  const double n = n_eff.value();
  if (n == 1.0)
    throw InvalidArgument("spectral_gap_bound: N = 1 is a pole of KN/(N-1)");
  return K * n / (n - 1.0);
}

ComposedBound sigma_composed_bound(double K, double N) {
  if (!(K > 0.0)) throw InvalidArgument("sigma_composed_bound: K must be positive");
  if (!(N < -1.0)) throw InvalidArgument("sigma_composed_bound: N must be below -1");
  ComposedBound out;
  out.sigma_threshold = K * (2.0 - N) / (1.0 - N);
  out.composed_lambda =
      spectral_gap_bound(out.sigma_threshold, EffectiveDim::finite_unchecked(N - 1.0));
  out.improves =
      out.composed_lambda > spectral_gap_bound(K, EffectiveDim::finite_unchecked(N));
  return out;
}

namespace {

struct LineMeasure {
  const WeightedManifold* wm;
  double L;

  double density(double x) const {
    Vec p(1);
    p(0) = x;
    return std::exp(-wm->psi().value(p));
  }

  double mass(double a, double b) const {
    if (!(b > a)) return 0.0;
    return simpson_adaptive([this](double x) { return density(x); }, a, b, 1e-10);
  }
};

} // namespace

ConcentrationProfile concentration_profile(const WeightedManifold& wm,
                                           const std::vector<double>& r_values,
                                           std::optional<double> truncation) {
  if (wm.dim() != 1)
    throw InvalidArgument("concentration_profile requires a 1-D manifold");
  double L;
  if (truncation) {
    L = *truncation;
  } else {
    const Truncation tr = default_truncation(wm);
    if (!tr.finite)
      throw NumericError(
          "concentration_profile: measure does not normalize (infinite volume)");
    L = tr.half_width;
  }
  LineMeasure mu{&wm, L};
  const double total = mu.mass(-L, L);
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericError("concentration_profile: normalization failed");

  // Median by bisection on the cumulative mass.
  double lo = -L, hi = L;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, L); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mu.mass(-L, mid) < 0.5 * total)
      lo = mid;
    else
      hi = mid;
  }
  const double median = 0.5 * (lo + hi);

  std::optional<double> bound_rate;
  if (wm.labels().curvature_k && wm.labels().effective_dim) {
    const double K = *wm.labels().curvature_k;
    const double N = *wm.labels().effective_dim;
    bound_rate = std::sqrt(K * N / (N - 1.0)) / 3.0;
  }

  ConcentrationProfile profile;
  profile.median = median;
  profile.total_mass = total;
  profile.truncation = L;
  for (double r : r_values) {
    if (r < 0.0) throw InvalidArgument("concentration radius must be nonnegative");
    ConcentrationPoint pt;
    pt.r = r;
    if (r == 0.0) {
      // A = half line at the median has mass exactly 1/2, and B(A, 0) = A.
      pt.half_line_alpha = 0.5;
    } else {
      const double upper = mu.mass(median + r, L) / total;
      const double lower = mu.mass(-L, median - r) / total;
      pt.half_line_alpha = std::max(upper, lower);
    }
    if (bound_rate) {
      pt.bound = std::exp(-*bound_rate * r);
      pt.exceeds_bound = pt.half_line_alpha > pt.bound;
      profile.any_exceeds = profile.any_exceeds || pt.exceeds_bound;
    }
    profile.points.push_back(pt);
  }
  return profile;
}

LsiResult lsi_deficit(const WeightedManifold& wm, const ScalarField& f, double K,
                      const EffectiveDim& n_eff,
                      std::optional<double> truncation) {
  if (wm.dim() != 1) throw InvalidArgument("lsi_deficit requires a 1-D manifold");
  if (!(K > 0.0)) throw InvalidArgument("lsi_deficit: K must be positive");
  double L;
  if (truncation) {
    L = *truncation;
  } else {
    const Truncation tr = default_truncation(wm);
    if (!tr.finite)
      throw NumericError("lsi_deficit: measure does not normalize (infinite volume)");
    L = tr.half_width;
  }

  auto fval = [&](double x) {
    Vec p(1);
    p(0) = x;
    return f.value(p);
  };
  auto fgrad = [&](double x) {
    Vec p(1);
    p(0) = x;
    return f.jet(p).grad(0);
  };
  LineMeasure mu{&wm, L};

  const double measure_total = mu.mass(-L, L);
  auto dm = [&](double x) { return mu.density(x) / measure_total; };

  const double fmin_probe = std::min({fval(-L), fval(0.0), fval(L)});
  if (fmin_probe < -1e-12)
    throw InvalidArgument("lsi_deficit: f must be nonnegative");

  const double z =
      simpson_adaptive([&](double x) { return fval(x) * dm(x); }, -L, L, 1e-11);
  if (!(z > 0.0)) throw NumericError("lsi_deficit: f has zero mass");

  const double entropy = simpson_adaptive(
      [&](double x) {
        const double v = fval(x) / z;
        if (v <= 0.0) return 0.0; // integrate over {f > 0}
        return v * std::log(v) * dm(x);
      },
      -L, L, 1e-10);
  const double fisher = simpson_adaptive(
      [&](double x) {
        const double v = fval(x) / z;
        if (v <= 0.0) return 0.0;
        const double d = fgrad(x) / z;
        return d * d / v * dm(x);
      },
      -L, L, 1e-10);

  LsiResult out;
  out.constant = n_eff.is_infinite()
                     ? 1.0 / (2.0 * K)
                     : (n_eff.value() - 1.0) / (2.0 * K * n_eff.value());
  out.entropy = entropy;
  out.fisher = fisher;
  out.deficit = entropy - out.constant * fisher;
  out.normalization = 1.0 / z;
  return out;
}

std::vector<LsiSweepPoint> lsi_tilt_sweep(const WeightedManifold& wm, double K,
                                          const EffectiveDim& n_eff, int count,
                                          std::optional<double> beta_max,
                                          std::optional<double> truncation) {
  if (count < 1) throw InvalidArgument("lsi_tilt_sweep: count must be positive");
  double bmax;
  if (beta_max) {
    bmax = *beta_max;
  } else if (wm.labels().decay_rate) {
    bmax = *wm.labels().decay_rate;
  } else {
    throw InvalidArgument(
        "lsi_tilt_sweep: no decay-rate label; pass beta_max explicitly");
  }
  std::vector<LsiSweepPoint> sweep;
  sweep.reserve(static_cast<std::size_t>(count));
  for (int j = 1; j <= count; ++j) {
    const double beta = bmax * j / (count + 1); // strictly inside (0, bmax)
    const ScalarField f = ScalarField::from_text(
        "exp(" + format_g17(beta) + "*x)", wm.chart().coordinates());
    sweep.push_back({beta, lsi_deficit(wm, f, K, n_eff, truncation).deficit});
  }
  return sweep;
}

} // namespace ricn
