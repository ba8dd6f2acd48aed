// ricn: weighted Ricci curvature, weighted Laplacian spectra, and
// functional-inequality diagnostics on coordinate charts.
//
// Subcommands: curvature, spectrum, bochner, concentration, lsi,
// warped-product, verify. Reports are JSON (default) or CSV; identical
// configurations produce byte-identical output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ricn/analysis.hpp"
#include "ricn/report.hpp"
#include "ricn/spectral.hpp"
#include "ricn/verify.hpp"
#include "ricn/weighted.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

struct Options {
  // manifold
  std::string model;
  std::string weight;
  std::vector<std::string> metric;
  std::optional<double> K;
  std::string n_eff; // accepts "inf"
  std::optional<double> radius;
  std::optional<double> slope;
  int dim = 2;
  // base for warped products
  std::string base_model = "circle";
  std::string base_weight;
  // numerics
  std::optional<double> L;
  int nodes = 4001;
  std::string grid;    // a:b:n
  std::string grid2d;  // ax:bx:nx,ay:by:ny
  std::vector<double> r_values;
  std::string u_field; // scalar field for bochner
  int beta_count = 64;
  std::optional<double> beta_max;
  std::vector<double> l2_schedule = {10.0, 20.0, 40.0, 80.0};
  // output
  std::string format = "json";
  std::string out;
  unsigned jobs = 0;
  std::uint64_t seed = 20240814;
  // verify
  std::string suite = "all";
};

[[noreturn]] void fail(int code, const std::string& category,
                       const std::string& message) {
  std::string line = message;
  for (char& c : line)
    if (c == '\n') c = ' ';
  std::fprintf(stderr, "ricn: error: %s: %s\n", category.c_str(), line.c_str());
  std::exit(code);
}

std::vector<double> parse_axis(const std::string& spec) {
  // "a:b:n" -> n uniform samples on [a, b]
  double a = 0, b = 0;
  int n = 0;
  const std::size_t c1 = spec.find(':');
  const std::size_t c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ricn::InvalidArgument("grid spec must be a:b:n, got '" + spec + "'");
  try {
    a = std::stod(spec.substr(0, c1));
    b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    n = std::stoi(spec.substr(c2 + 1));
  } catch (const std::exception&) {
    throw ricn::InvalidArgument("grid spec must be a:b:n, got '" + spec + "'");
  }
  if (n < 1 || !(b >= a))
    throw ricn::InvalidArgument("grid spec needs b >= a and n >= 1");
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] =
        n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
  return xs;
}

ricn::WeightedManifold build_manifold(const Options& opt) {
  using ricn::models::ModelParams;
  if (!opt.model.empty()) {
    ModelParams params;
    params.K = opt.K;
    if (!opt.n_eff.empty() && opt.n_eff != "inf" && opt.n_eff != "infinity")
      params.N = std::stod(opt.n_eff);
    params.radius = opt.radius;
    params.slope = opt.slope;
    params.dim = opt.dim;
    return ricn::models::by_tag(opt.model, params);
  }
  if (!opt.metric.empty()) {
    if (opt.metric.size() != 3)
      throw ricn::InvalidArgument(
          "custom 2-D charts take three --metric entries: g11 g12 g22");
    if (opt.weight.empty())
      throw ricn::InvalidArgument("custom charts need --weight");
    const std::vector<std::string> coords = {"x", "y"};
    std::vector<ricn::ScalarField> g;
    g.push_back(ricn::ScalarField::from_text(opt.metric[0], coords));
    g.push_back(ricn::ScalarField::from_text(opt.metric[1], coords));
    g.push_back(ricn::ScalarField::from_text(opt.metric[1], coords));
    g.push_back(ricn::ScalarField::from_text(opt.metric[2], coords));
    ricn::Chart chart(coords, {ricn::Interval{}, ricn::Interval{}}, std::move(g));
    ricn::ModelLabels labels;
    labels.family = "custom-2d";
    labels.curvature_k = opt.K;
    return ricn::WeightedManifold(
        std::move(chart), ricn::ScalarField::from_text(opt.weight, coords),
        labels);
  }
  if (!opt.weight.empty()) {
    ricn::ModelLabels labels;
    labels.curvature_k = opt.K;
    if (!opt.n_eff.empty() && opt.n_eff != "inf")
      labels.effective_dim = std::stod(opt.n_eff);
    return ricn::models::custom_line(opt.weight, labels);
  }
  throw ricn::InvalidArgument(
      "no manifold specified: use --model TAG, or --weight EXPR "
      "(optionally with --metric for 2-D charts)");
}

ricn::EffectiveDim effective_dim(const Options& opt, int dim) {
  if (opt.n_eff.empty())
    throw ricn::InvalidArgument("this command needs --Neff (a number or 'inf')");
  return ricn::EffectiveDim::parse(opt.n_eff, dim);
}

std::vector<ricn::Vec> grid_points(const Options& opt,
                                   const ricn::WeightedManifold& wm) {
  const ricn::Chart& chart = wm.chart();
  std::vector<ricn::Vec> points;
  if (chart.dim() == 1) {
    const std::string spec = opt.grid.empty() ? "-5:5:101" : opt.grid;
    for (double x : parse_axis(spec)) {
      ricn::Vec p(1);
      p(0) = x;
      points.push_back(p);
    }
    return points;
  }
  if (chart.dim() == 2) {
    std::vector<double> xs, ys;
    if (!opt.grid2d.empty()) {
      const std::size_t comma = opt.grid2d.find(',');
      if (comma == std::string::npos)
        throw ricn::InvalidArgument(
            "--grid-2d must be ax:bx:nx,ay:by:ny");
      xs = parse_axis(opt.grid2d.substr(0, comma));
      ys = parse_axis(opt.grid2d.substr(comma + 1));
    } else {
      auto axis_default = [&](int axis) {
        const ricn::Interval iv = chart.domain()[static_cast<std::size_t>(axis)];
        const double lo = std::isfinite(iv.lo) ? iv.lo + 0.5 : -2.0;
        const double hi = std::isfinite(iv.hi) ? iv.hi - 0.5 : 2.0;
        if (!(hi > lo))
          throw ricn::InvalidArgument("domain too small for a default grid; "
                                      "pass --grid-2d");
        std::vector<double> xs9(9);
        for (int i = 0; i < 9; ++i) xs9[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / 8.0;
        return xs9;
      };
      xs = axis_default(0);
      ys = axis_default(1);
    }
    for (double x : xs)
      for (double y : ys) {
        ricn::Vec p(2);
        p(0) = x;
        p(1) = y;
        points.push_back(p);
      }
    return points;
  }
  throw ricn::InvalidArgument("grids for 3-D charts are not wired to the CLI");
}

void emit(const Options& opt, const std::string& payload) {
  if (opt.out.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) fail(kExitConfigError, "config", "cannot open output file " + opt.out);
  f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

ricn::JsonWriter make_header(const Options& opt, const std::string& subcommand) {
  ricn::JsonWriter w;
  w.begin_object();
  w.key("meta").begin_object();
  w.field("tool", "ricn");
  w.field("version", kVersion);
  w.field("subcommand", subcommand);
  w.field("seed", static_cast<long>(opt.seed));
  w.end_object();
  return w;
}

void write_inputs(ricn::JsonWriter& w, const Options& opt,
                  const ricn::WeightedManifold* wm) {
  w.key("inputs").begin_object();
  if (!opt.model.empty()) w.field("model", opt.model);
  if (!opt.weight.empty()) w.field("weight", opt.weight);
  if (!opt.metric.empty()) {
    w.key("metric").begin_array();
    for (const std::string& m : opt.metric) w.value(m);
    w.end_array();
  }
  if (opt.K) w.field("K", *opt.K);
  if (!opt.n_eff.empty()) w.field("Neff", opt.n_eff);
  if (opt.radius) w.field("radius", *opt.radius);
  if (opt.slope) w.field("slope", *opt.slope);
  if (wm) w.field("dim", wm->dim());
  if (opt.L) w.field("L", *opt.L);
  w.field("nodes", opt.nodes);
  w.end_object();
}

// --- curvature ---------------------------------------------------------------

int cmd_curvature(const Options& opt) {
  const ricn::WeightedManifold wm = build_manifold(opt);
  const ricn::EffectiveDim n_eff = effective_dim(opt, wm.dim());
  const std::vector<ricn::Vec> points = grid_points(opt, wm);

  const ricn::CurvatureReport report =
      ricn::curvature_report(wm, points, n_eff, opt.jobs);

  if (opt.format == "csv") {
    std::vector<std::string> header;
    for (const std::string& c : wm.chart().coordinates()) header.push_back(c);
    header.push_back("ric_n_min");
    for (const std::string& c : wm.chart().coordinates())
      header.push_back("dir_" + c);
    ricn::CsvWriter csv(header);
    for (const auto& e : report.entries) {
      std::vector<double> row;
      for (int i = 0; i < wm.dim(); ++i) row.push_back(e.point(i));
      row.push_back(e.min_value);
      for (int i = 0; i < wm.dim(); ++i) row.push_back(e.min_direction(i));
      csv.row_numeric(row);
    }
    emit(opt, csv.str());
    return kExitOk;
  }

  ricn::JsonWriter w = make_header(opt, "curvature");
  write_inputs(w, opt, &wm);
  w.key("results").begin_object();
  w.key("summary").begin_object();
  w.field("min", report.summary_min);
  w.field("max", report.summary_max);
  w.field("points", static_cast<int>(report.entries.size()));
  w.end_object();
  w.key("points").begin_array();
  for (const auto& e : report.entries) {
    w.begin_object();
    w.key("point").begin_array();
    for (int i = 0; i < wm.dim(); ++i) w.value(e.point(i));
    w.end_array();
    w.field("min", e.min_value);
    w.key("direction").begin_array();
    for (int i = 0; i < wm.dim(); ++i) w.value(e.min_direction(i));
    w.end_array();
    w.key("form").begin_array();
    for (int i = 0; i < wm.dim(); ++i) {
      w.begin_array();
      for (int j = 0; j < wm.dim(); ++j) w.value(e.form(i, j));
      w.end_array();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  w.end_object();
  emit(opt, w.str() + "\n");
  return kExitOk;
}

// --- spectrum ----------------------------------------------------------------

int cmd_spectrum(const Options& opt) {
  const ricn::WeightedManifold wm = build_manifold(opt);
  if (wm.dim() != 1)
    throw ricn::InvalidArgument("spectrum requires a 1-D manifold");
  double L;
  if (opt.L) {
    L = *opt.L;
  } else {
    L = ricn::default_truncation(wm).half_width;
  }
  const ricn::FirstEigenResult e =
      ricn::first_nonzero_eigenvalue(wm, L, opt.nodes);

  if (opt.format == "csv") {
    ricn::CsvWriter csv({"index", "eigenvalue", "residual"});
    for (std::size_t i = 0; i < e.fine.eigenvalues.size(); ++i)
      csv.row_numeric({static_cast<double>(i), e.fine.eigenvalues[i],
                       e.fine.residuals[i]});
    emit(opt, csv.str());
    return kExitOk;
  }

  ricn::JsonWriter w = make_header(opt, "spectrum");
  write_inputs(w, opt, &wm);
  w.key("results").begin_object();
  w.field("lambda0", e.lambda0);
  w.field("lambda1", e.lambda1);
  w.field("richardson_lambda1", e.richardson_lambda1);
  if (e.bound) {
    w.field("bound", *e.bound);
    w.field("margin", *e.bound_margin);
  }
  w.field("gap_claim_valid", e.gap_claim_valid);
  if (!e.gap_claim_valid) w.field("gap_claim_note", e.gap_claim_note);
  w.key("grid").begin_object();
  w.field("L", e.grid.half_width);
  w.field("nodes", e.grid.node_count);
  w.field("h", e.grid.spacing);
  w.end_object();
  w.key("residuals").value_array(e.fine.residuals);
  // Decimated eigenfunction sample (at most 101 nodes).
  const std::size_t stride =
      std::max<std::size_t>(1, e.eigenfunction.size() / 100);
  w.key("eigenfunction").begin_array();
  for (std::size_t i = 0; i < e.eigenfunction.size(); i += stride) {
    w.begin_array();
    w.value(e.grid.nodes[i]);
    w.value(e.eigenfunction[i]);
    w.end_array();
  }
  w.end_array();
  w.end_object();
  w.end_object();
  emit(opt, w.str() + "\n");
  return kExitOk;
}

// --- bochner -----------------------------------------------------------------

int cmd_bochner(const Options& opt) {
  const ricn::WeightedManifold wm = build_manifold(opt);
  if (opt.u_field.empty())
    throw ricn::InvalidArgument("bochner needs --u EXPR (the test field)");
  const ricn::ScalarField u =
      ricn::ScalarField::from_text(opt.u_field, wm.chart().coordinates());
  const ricn::EffectiveDim n_eff = effective_dim(opt, wm.dim());
  const std::vector<ricn::Vec> points = grid_points(opt, wm);

  std::vector<ricn::BochnerReport> reports(points.size());
  ricn::parallel_for(points.size(), opt.jobs, [&](std::size_t i) {
    reports[i] = ricn::bochner_report(wm, u, points[i], n_eff);
  });

  if (opt.format == "csv") {
    std::vector<std::string> header;
    for (const std::string& c : wm.chart().coordinates()) header.push_back(c);
    header.insert(header.end(),
                  {"lhs", "rhs_inf", "gap_inf", "rhs_n", "gap_n"});
    ricn::CsvWriter csv(header);
    for (const auto& r : reports) {
      std::vector<std::string> row;
      for (int i = 0; i < wm.dim(); ++i)
        row.push_back(ricn::format_g17(r.point(i)));
      row.push_back(ricn::format_g17(r.lhs));
      row.push_back(ricn::format_g17(r.rhs_inf));
      row.push_back(ricn::format_g17(r.gap_inf));
      row.push_back(r.rhs_n.to_string());
      row.push_back(r.gap_n.to_string());
      csv.row(row);
    }
    emit(opt, csv.str());
    return kExitOk;
  }

  ricn::JsonWriter w = make_header(opt, "bochner");
  write_inputs(w, opt, &wm);
  w.key("results").begin_object();
  w.field("field", opt.u_field);
  w.key("points").begin_array();
  for (const auto& r : reports) {
    w.begin_object();
    w.key("point").begin_array();
    for (int i = 0; i < wm.dim(); ++i) w.value(r.point(i));
    w.end_array();
    w.field("lhs", r.lhs);
    w.field("rhs_inf", r.rhs_inf);
    w.field("gap_inf", r.gap_inf);
    if (r.rhs_n.is_neg_infinity()) {
      w.field("rhs_n", "-inf");
      w.field("gap_n", "-inf");
    } else {
      w.field("rhs_n", r.rhs_n.value());
      w.field("gap_n", r.gap_n.value());
    }
    w.field("hessian_hs_sq", r.hessian_hs_sq);
    w.field("delta_u", r.laplacian);
    w.field("delta_m_u", r.weighted_laplacian);
    w.field("grad_psi_inner", r.grad_psi_inner);
    if (r.trace_deficit) w.field("trace_deficit", *r.trace_deficit);
    if (r.quadratic_slack) w.field("quadratic_slack", *r.quadratic_slack);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  w.end_object();
  emit(opt, w.str() + "\n");
  return kExitOk;
}

// --- concentration -------------------------------------------------------------

int cmd_concentration(const Options& opt) {
  const ricn::WeightedManifold wm = build_manifold(opt);
  std::vector<double> rs = opt.r_values;
  if (rs.empty()) rs = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
  const ricn::ConcentrationProfile profile =
      ricn::concentration_profile(wm, rs, opt.L);

  if (opt.format == "csv") {
    ricn::CsvWriter csv({"r", "half_line_alpha", "bound", "exceeds_bound"});
    for (const auto& pt : profile.points)
      csv.row({ricn::format_g17(pt.r), ricn::format_g17(pt.half_line_alpha),
               ricn::format_g17(pt.bound), pt.exceeds_bound ? "1" : "0"});
    emit(opt, csv.str());
    return kExitOk;
  }

  ricn::JsonWriter w = make_header(opt, "concentration");
  write_inputs(w, opt, &wm);
  w.key("results").begin_object();
  w.field("median", profile.median);
  w.field("total_mass", profile.total_mass);
  w.field("truncation", profile.truncation);
  w.field("estimate_kind",
          "half-line lower estimates of the concentration function");
  w.field("any_exceeds_bound", profile.any_exceeds);
  w.key("points").begin_array();
  for (const auto& pt : profile.points) {
    w.begin_object();
    w.field("r", pt.r);
    w.field("half_line_alpha", pt.half_line_alpha);
    w.field("bound", pt.bound);
    w.field("exceeds_bound", pt.exceeds_bound);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  w.end_object();
  emit(opt, w.str() + "\n");
  return kExitOk;
}

// --- lsi -----------------------------------------------------------------------

int cmd_lsi(const Options& opt) {
  const ricn::WeightedManifold wm = build_manifold(opt);
  if (!opt.K && !wm.labels().curvature_k)
    throw ricn::InvalidArgument("lsi needs --K (curvature bound)");
  const double K = opt.K ? *opt.K : *wm.labels().curvature_k;
  const ricn::EffectiveDim n_eff = effective_dim(opt, wm.dim());

  if (!opt.u_field.empty()) {
    const ricn::ScalarField f =
        ricn::ScalarField::from_text(opt.u_field, wm.chart().coordinates());
    const ricn::LsiResult res = ricn::lsi_deficit(wm, f, K, n_eff, opt.L);
    ricn::JsonWriter w = make_header(opt, "lsi");
    write_inputs(w, opt, &wm);
    w.key("results").begin_object();
    w.field("f", opt.u_field);
    w.field("entropy", res.entropy);
    w.field("fisher", res.fisher);
    w.field("constant", res.constant);
    w.field("deficit", res.deficit);
    w.field("normalization", res.normalization);
    w.end_object();
    w.end_object();
    emit(opt, w.str() + "\n");
    return kExitOk;
  }

  const std::vector<ricn::LsiSweepPoint> sweep = ricn::lsi_tilt_sweep(
      wm, K, n_eff, opt.beta_count, opt.beta_max, opt.L);
  double max_deficit = sweep.front().deficit;
  for (const auto& pt : sweep) max_deficit = std::max(max_deficit, pt.deficit);

  if (opt.format == "csv") {
    ricn::CsvWriter csv({"beta", "deficit"});
    for (const auto& pt : sweep) csv.row_numeric({pt.beta, pt.deficit});
    emit(opt, csv.str());
    return kExitOk;
  }

  ricn::JsonWriter w2 = make_header(opt, "lsi");
  write_inputs(w2, opt, &wm);
  w2.key("results").begin_object();
  w2.field("beta_count", opt.beta_count);
  w2.field("max_deficit", max_deficit);
  w2.field("violation_found", max_deficit > 0.0);
  w2.key("sweep").begin_array();
  for (const auto& pt : sweep) {
    w2.begin_object();
    w2.field("beta", pt.beta);
    w2.field("deficit", pt.deficit);
    w2.end_object();
  }
  w2.end_array();
  w2.end_object();
  w2.end_object();
  emit(opt, w2.str() + "\n");
  return kExitOk;
}

// --- warped product --------------------------------------------------------------

int cmd_warped(const Options& opt) {
  if (!opt.K || opt.n_eff.empty())
    throw ricn::InvalidArgument("warped-product needs --K and --Neff");
  const double K = *opt.K;
  const double N = std::stod(opt.n_eff);

  ricn::WeightedManifold base;
  if (!opt.base_weight.empty()) {
    base = ricn::models::custom_line(opt.base_weight);
  } else {
    ricn::models::ModelParams params;
    params.K = opt.K;
    params.N = N - 1.0; // shifted effective dimension for m1-type bases
    params.radius = opt.radius;
    params.slope = opt.slope;
    if (opt.base_model == "m1" || opt.base_model == "m2")
      params.K = K * (2.0 - N) / (1.0 - N);
    base = ricn::models::by_tag(opt.base_model, params);
  }

  const ricn::WarpedProduct wp = ricn::warped_product(base, K, N);
  const ricn::EffectiveDim n_eff = ricn::EffectiveDim::finite(N, 2);
  const ricn::ComposedBound cb = ricn::sigma_composed_bound(K, N);

  // Radial curvature samples over (t, x).
  std::vector<double> ts = parse_axis(opt.grid.empty() ? "-2:2:9" : opt.grid);
  const ricn::Interval base_dom = base.chart().domain().front();
  const double xlo = std::isfinite(base_dom.lo) ? base_dom.lo + 0.3 : -2.0;
  const double xhi = std::isfinite(base_dom.hi) ? base_dom.hi - 0.3 : 2.0;
  std::vector<double> xs(5);
  for (int i = 0; i < 5; ++i) xs[static_cast<std::size_t>(i)] = xlo + (xhi - xlo) * i / 4.0;

  ricn::Vec radial(2);
  radial << 1.0, 0.0;
  struct RadialSample {
    double t, x, value;
  };
  std::vector<RadialSample> samples;
  double worst_radial = 0.0;
  for (double t : ts)
    for (double x : xs) {
      ricn::Vec p(2);
      p << t, x;
      const double v = ricn::ric_n_direction(wp.manifold, p, radial, n_eff).value();
      samples.push_back({t, x, v});
      worst_radial = std::max(worst_radial, std::abs(v - K));
    }

  // Measure splitting: density(t, x) / density(0, x) vs cosh(a t)^(N-1).
  double worst_ratio = 0.0;
  for (double x : xs) {
    ricn::Vec p1(2), p0(2);
    p1 << 1.0, x;
    p0 << 0.0, x;
    const double ratio = wp.manifold.density(p1) / wp.manifold.density(p0);
    worst_ratio = std::max(
        worst_ratio, std::abs(ratio - std::pow(std::cosh(wp.warp_rate), N - 1.0)));
  }

  const ricn::SigmaCurvatureReport sig = ricn::sigma_curvature_check(wp, xs);

  if (opt.format == "csv") {
    ricn::CsvWriter csv({"t", "x", "ric_n_radial"});
    for (const auto& s : samples) csv.row_numeric({s.t, s.x, s.value});
    emit(opt, csv.str());
    return kExitOk;
  }

  ricn::JsonWriter w = make_header(opt, "warped-product");
  write_inputs(w, opt, nullptr);
  w.key("results").begin_object();
  w.field("base", opt.base_weight.empty() ? opt.base_model : "custom");
  w.field("warp_rate", wp.warp_rate);
  w.field("radial_target", K);
  w.field("radial_worst_deviation", worst_radial);
  w.field("density_ratio_worst_deviation", worst_ratio);
  w.key("bounds").begin_object();
  w.field("sigma_threshold", cb.sigma_threshold);
  w.field("composed_lambda", cb.composed_lambda);
  w.field("gap_bound", ricn::spectral_gap_bound(K, ricn::EffectiveDim::finite_unchecked(N)));
  w.field("composed_improves", cb.improves);
  w.end_object();
  w.key("sigma_check").begin_object();
  w.field("threshold", sig.threshold);
  w.field("min_margin", sig.min_margin);
  w.key("entries").begin_array();
  for (const auto& e : sig.entries) {
    w.begin_object();
    w.field("x", e.x);
    w.field("ric_n_minus_1", e.ric_n_minus_1);
    w.field("margin", e.margin);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  w.key("radial_samples").begin_array();
  for (const auto& s : samples) {
    w.begin_object();
    w.field("t", s.t);
    w.field("x", s.x);
    w.field("ric_n", s.value);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  w.end_object();
  emit(opt, w.str() + "\n");
  return kExitOk;
}

// --- verify ----------------------------------------------------------------------

int cmd_verify(const Options& opt) {
  ricn::VerifyOptions vopt;
  vopt.seed = opt.seed;
  vopt.jobs = opt.jobs;
  const std::vector<ricn::CheckResult> results =
      ricn::verify_suite(opt.suite, vopt);

  if (opt.format == "csv") {
    ricn::CsvWriter csv({"id", "name", "expected", "got", "tolerance", "status"});
    for (const auto& r : results)
      csv.row({r.id, r.name, r.expected, r.got, ricn::format_g17(r.tolerance),
               r.passed ? "PASS" : "FAIL"});
    emit(opt, csv.str());
  } else if (opt.format == "json") {
    ricn::JsonWriter w = make_header(opt, "verify");
    w.key("inputs").begin_object();
    w.field("suite", opt.suite);
    w.end_object();
    w.key("results").begin_array();
    for (const auto& r : results) {
      w.begin_object();
      w.field("id", r.id);
      w.field("name", r.name);
      w.field("expected", r.expected);
      w.field("got", r.got);
      w.field("tolerance", r.tolerance);
      w.field("passed", r.passed);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    emit(opt, w.str() + "\n");
  } else {
    emit(opt, ricn::format_check_table(results));
  }

  for (const auto& r : results)
    if (!r.passed) return kExitCheckFailed;
  return kExitOk;
}

void add_manifold_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--model", opt.model,
                  "model tag: m1, m2, gauss, hyperbolic-example, sphere, "
                  "circle, flat-product");
  cmd->add_option("--weight", opt.weight, "weight expression psi(x) for a custom line");
  cmd->add_option("--metric", opt.metric,
                  "custom 2-D metric entries g11 g12 g22 (three expressions)");
  cmd->add_option("--K", opt.K, "curvature parameter K");
  cmd->add_option("--Neff", opt.n_eff, "effective dimension N (number or 'inf')");
  cmd->add_option("--radius", opt.radius, "radius for sphere/circle models");
  cmd->add_option("--slope", opt.slope, "weight slope for flat-product");
  cmd->add_option("--dim", opt.dim, "dimension for flat-product");
}

void add_output_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  cmd->add_option("--out", opt.out, "output path (default: stdout)");
  cmd->add_option("--jobs", opt.jobs, "worker threads for sweeps (0 = all cores)");
  cmd->add_option("--seed", opt.seed, "seed for randomized sweeps");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted Ricci curvature and spectral-gap toolkit"};
  app.set_config("--config", "", "key=value config file; flags override");
  Options opt;

  CLI::App* curvature = app.add_subcommand(
      "curvature", "pointwise minimum of Ric_N over a grid");
  add_manifold_flags(curvature, opt);
  add_output_flags(curvature, opt);
  curvature->add_option("--grid", opt.grid, "1-D grid a:b:n (default -5:5:101)");
  curvature->add_option("--grid-2d", opt.grid2d, "2-D grid ax:bx:nx,ay:by:ny");

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "first nonzero eigenvalue of the weighted Laplacian");
  add_manifold_flags(spectrum, opt);
  add_output_flags(spectrum, opt);
  spectrum->add_option("--L", opt.L, "truncation half-width (default: tail rule)");
  spectrum->add_option("--nodes", opt.nodes, "grid nodes (odd, default 4001)");

  CLI::App* bochner = app.add_subcommand(
      "bochner", "Bochner identity and inequality reports for a field");
  add_manifold_flags(bochner, opt);
  add_output_flags(bochner, opt);
  bochner->add_option("--u", opt.u_field, "scalar field expression to test");
  bochner->add_option("--grid", opt.grid, "1-D grid a:b:n");
  bochner->add_option("--grid-2d", opt.grid2d, "2-D grid ax:bx:nx,ay:by:ny");

  CLI::App* conc = app.add_subcommand(
      "concentration", "half-line concentration profile vs the exponential bound");
  add_manifold_flags(conc, opt);
  add_output_flags(conc, opt);
  conc->add_option("--r", opt.r_values, "radii (default 0,0.5,1,2,4,8)");
  conc->add_option("--L", opt.L, "truncation half-width (default: tail rule)");

  CLI::App* lsi = app.add_subcommand(
      "lsi", "log-Sobolev deficit for tilted exponentials or a custom density");
  add_manifold_flags(lsi, opt);
  add_output_flags(lsi, opt);
  lsi->add_option("--u", opt.u_field, "density expression f (skips the tilt sweep)");
  lsi->add_option("--beta-count", opt.beta_count, "tilt grid size (default 64)");
  lsi->add_option("--beta-max", opt.beta_max,
                  "tilt upper end (default: density decay rate)");
  lsi->add_option("--L", opt.L, "truncation half-width (default: tail rule)");

  CLI::App* warped = app.add_subcommand(
      "warped-product", "hyperbolic-cosine warped product over a 1-D base");
  add_manifold_flags(warped, opt);
  add_output_flags(warped, opt);
  warped->add_option("--base", opt.base_model,
                     "base model tag (default circle)");
  warped->add_option("--base-weight", opt.base_weight,
                     "custom base weight expression");
  warped->add_option("--grid", opt.grid, "t samples a:b:n (default -2:2:9)");

  CLI::App* verify = app.add_subcommand(
      "verify", "run the named verification suite and print a check table");
  verify->add_option("suite", opt.suite,
                     "all, curvature, bochner, spectral, concentration, "
                     "warped, hyperbolic")
      ->check(CLI::IsMember(ricn::verify_suite_names()));
  add_output_flags(verify, opt);
  verify->get_option("--format")->default_str("table");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "ricn: error: config: %s\n", e.what());
    return kExitConfigError;
  }

  // verify defaults to the human-readable table; everything else to JSON.
  if (verify->parsed() && verify->get_option("--format")->count() == 0)
    opt.format = "table";

  try {
    if (curvature->parsed()) return cmd_curvature(opt);
    if (spectrum->parsed()) return cmd_spectrum(opt);
    if (bochner->parsed()) return cmd_bochner(opt);
    if (conc->parsed()) return cmd_concentration(opt);
    if (lsi->parsed()) return cmd_lsi(opt);
    if (warped->parsed()) return cmd_warped(opt);
    if (verify->parsed()) return cmd_verify(opt);
  } catch (const ricn::InvalidArgument& e) {
    fail(kExitConfigError, "config", e.what());
  } catch (const ricn::ParseError& e) {
    fail(kExitConfigError, "config",
         std::string(e.what()) + " (position " + std::to_string(e.position()) + ")");
  } catch (const ricn::Error& e) {
    fail(kExitNumericError, "numeric", e.what());
  } catch (const std::exception& e) {
    fail(kExitNumericError, "internal", e.what());
  }
  return kExitOk;
}
