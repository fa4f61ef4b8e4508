#include "anosov/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace anosov {

const char* tool_version() { return ANOSOV_LAB_VERSION; }

void apply_overrides(ExperimentConfig& config, const RunOverrides& overrides) {
  if (overrides.radius) {
    if (*overrides.radius < 0) throw Error("--radius must be non-negative");
    config.radius = *overrides.radius;
  }
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.seed) config.seed = *overrides.seed;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

// JSON has no infinities; they become null.
Json number_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Vector sign_fixed(const Subspace& line) {
  Vector v = line.frame().col(0);
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  return v[i] < 0 ? Vector(-v) : v;
}

void write_frame(std::ostream& os, const Subspace& s) {
  const Matrix& f = s.frame();
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    for (Eigen::Index i = 0; i < f.rows(); ++i) os << ',' << format_number(f(i, j));
  }
}

void frame_header(std::ostream& os, const char* name, int d, int k) {
  for (int j = 1; j <= k; ++j) {
    for (int i = 1; i <= d; ++i) os << ',' << name << '_' << i << '_' << j;
  }
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    out << content;
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    names_.push_back(name);
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

struct Run {
  Run(const ExperimentConfig& c, const Representation& p, Outputs& o) : cfg(c), rep(p), out(o) {}

  const ExperimentConfig& cfg;
  const Representation& rep;
  Outputs& out;
  Json estimates = Json::object();
  Json witnesses = Json::object();
  Json tolerances = Json::object();
  Json verdicts = Json::array();
  std::vector<std::string> warnings;

  int d() const { return rep.dim(); }
  const Json& param(const char* key) const { return cfg.params.at(key); }
  std::string word(const std::vector<int>& w) const { return format_word(rep.generators(), w); }

  void verdict(const std::string& name, bool pass, const std::string& detail) {
    verdicts.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
  }

  bool negative() const {
    return std::any_of(verdicts.begin(), verdicts.end(), [](const Json& v) { return !v["pass"].get<bool>(); });
  }

  void spectra_csv(const Ball& ball, int m) {
    std::ostringstream os;
    write_spectra_csv(os, ball, m);
    out.write("spectra.csv", os.str());
  }

  LimitCloud cloud(const Ball& ball, int m, double gap_tol) {
    SampleOptions so;
    so.gap_tol = gap_tol;
    tolerances["gap_tol"] = gap_tol;
    tolerances["sample_dedup_tol"] = so.dedup_tol;
    LimitCloud c = limit_samples(rep, ball, m, so);
    warnings.insert(warnings.end(), c.warnings.begin(), c.warnings.end());
    estimates["samples"] = c.samples.size();
    std::ostringstream os;
    write_cloud_csv(os, c);
    out.write("cloud.csv", os.str());
    return c;
  }
};

std::string fmt(double x) { return format_number(x); }

std::string brief(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int ratio_index(const ExperimentConfig& cfg, int d) {
  if (cfg.params.contains("m") && cfg.params["m"].is_number_integer()) return cfg.params["m"].get<int>();
  return d >= 3 ? 2 : 0;
}

void run_certify(Run& r) {
  const Ball ball = compute_ball(r.rep, r.cfg.radius);
  GapOptions go;
  go.slope_min = r.param("slope_min");
  go.r2_min = r.param("r2_min");
  r.tolerances["slope_min"] = go.slope_min;
  r.tolerances["r2_min"] = go.r2_min;
  std::ostringstream gaps;
  gaps << "k,length,min_log_gap,max_log_gap,count\n";
  Json per_k = Json::array();
  for (const auto& kj : r.param("k")) {
    const int k = kj.get<int>();
    const GapProfile gp = gap_profile(ball, k, go);
    for (const auto& e : gp.per_length) {
      gaps << k << ',' << e.length << ',' << fmt(e.min) << ',' << fmt(e.max) << ',' << e.count << '\n';
    }
    // Smallest Jordan gap log(lambda_k / lambda_{k+1}) over nontrivial elements.
    double jordan = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t i = 0; i < ball.elements.size(); ++i) {
      if (ball.elements[i].word.empty()) continue;
      const double g = ball.spectra[i].lambda[k - 1] - ball.spectra[i].lambda[k];
      if (g < jordan) {
        jordan = g;
        at = i;
      }
    }
    per_k.push_back({{"k", k},
                     {"slope", gp.fit.slope},
                     {"intercept", gp.fit.intercept},
                     {"r2", gp.fit.r2},
                     {"min_jordan_log_gap", number_json(jordan)}});
    r.witnesses["min_jordan_gap_k" + std::to_string(k)] = r.word(ball.elements[at].word);
    r.verdict("k=" + std::to_string(k) + " gap growth", gp.linear_growth, gp.verdict);
  }
  r.estimates["gap_profiles"] = per_k;
  r.estimates["ball_size"] = ball.elements.size();
  r.out.write("gap_profile.csv", gaps.str());
  r.spectra_csv(ball, ratio_index(r.cfg, r.d()));
}

void run_alpha(Run& r) {
  const int m = r.param("m");
  const double tol = r.param("tol");
  r.tolerances["alpha_tol"] = tol;
  const Ball ball = compute_ball(r.rep, r.cfg.radius);
  const AlphaEstimate a = alpha_m_estimate(ball, m, tol);
  Json per_radius = Json::array();
  for (double v : a.per_radius) per_radius.push_back(number_json(v));
  r.estimates["alpha"] = {{"m", m},
                          {"value", number_json(a.value)},
                          {"per_radius", per_radius},
                          {"qualifying", a.qualifying},
                          {"converged", a.converged}};
  r.witnesses["alpha"] = a.witness_word;
  r.verdict("qualifying elements", a.qualifying > 0,
            std::to_string(a.qualifying) + " elements pass the lambda_1/lambda_m filter");
  r.verdict("converged", a.converged,
            a.converged ? "last two radii agree within 1e-6" : "possibly not converged");

  const int irr_radius = r.param("irreducibility_radius");
  const IrreducibilityReport irr = irreducibility_proxy(r.rep, irr_radius, r.cfg.seed.value_or(0));
  r.estimates["irreducibility"] = {{"irreducible", irr.irreducible},
                                   {"span_rank", irr.span_rank},
                                   {"invariant_dim", irr.invariant_dim},
                                   {"radius", irr_radius}};
  if (!irr.irreducible) {
    r.warnings.push_back("representation looks reducible; the ball estimate need not equal the flow quantity");
  }

  if (std::isfinite(a.value) && a.value > 1.0) {
    const GapInequalityReport gi = eigen_gap_inequality_check(ball, m, a.value);
    r.estimates["gap_inequality"] = {{"worst_margin", gi.worst_margin}, {"checked", gi.checked}};
    r.witnesses["gap_inequality"] = gi.witness_word;
    r.verdict("eigenvalue gap inequality", gi.pass, "worst log margin " + brief(gi.worst_margin));
  }
  r.spectra_csv(ball, m);
}

std::vector<ChartPoint> chart_points(const ChartFrame& frame, const LimitCloud& cloud,
                                     std::ostringstream& csv) {
  const int d = cloud.dim;
  csv << "word,length";
  for (int i = 1; i < frame.m; ++i) csv << ",u_" << i;
  for (int i = 1; i <= d - frame.m; ++i) csv << ",w_" << i;
  csv << '\n';
  std::vector<ChartPoint> points;
  for (const auto& s : cloud.samples) {
    ChartPoint p;
    try {
      p = chart_coords(frame, s.xi1_plus);
    } catch (const Error&) {
      continue;
    }
    csv << s.word << ',' << s.witness.length();
    for (Eigen::Index i = 0; i < p.u.size(); ++i) csv << ',' << fmt(p.u[i]);
    for (Eigen::Index i = 0; i < p.w.size(); ++i) csv << ',' << fmt(p.w[i]);
    csv << '\n';
    points.push_back(std::move(p));
  }
  return points;
}

std::size_t sample_index(const Run& r, const LimitCloud& cloud, const char* key, std::size_t fallback) {
  const std::size_t i = r.param(key).is_null() ? fallback : r.param(key).get<std::size_t>();
  if (i >= cloud.samples.size()) {
    throw Error(std::string(key) + " index " + std::to_string(i) + " out of range (cloud has " +
                std::to_string(cloud.samples.size()) + " samples)");
  }
  return i;
}

void run_limitset(Run& r) {
  const int m = r.param("m");
  const Ball ball = compute_ball(r.rep, r.cfg.radius);
  const LimitCloud cloud = r.cloud(ball, m, r.param("gap_tol"));
  const double margin_tol = r.param("margin_tol");
  ScanOptions so;
  so.sep_tol = r.param("sep_tol");
  so.max_pairs = r.param("max_pairs");
  so.seed = *r.cfg.seed;
  r.tolerances["sep_tol"] = so.sep_tol;
  r.tolerances["margin_tol"] = margin_tol;

  if (cloud.samples.size() >= 2) {
    const TransversalityReport tr = transversality_scan(cloud, so);
    r.estimates["transversality"] = {{"min_margin", tr.min_margin},
                                     {"min_line_margin", tr.min_line_margin},
                                     {"pairs", tr.pairs}};
    r.witnesses["transversality"] = {cloud.samples[tr.worst_x].word, cloud.samples[tr.worst_y].word};
    r.verdict("transversality", tr.min_margin > margin_tol && tr.min_line_margin > margin_tol,
              "min margin " + brief(std::min(tr.min_margin, tr.min_line_margin)));
    const ControlledSetReport cs = controlled_set_check(cloud, so.sep_tol);
    r.estimates["controlled_set"] = {{"min_margin", cs.min_margin},
                                     {"pairs", cs.pairs},
                                     {"violations", cs.violations.size()}};
    r.verdict("controlled set", cs.min_margin > margin_tol, "min margin " + brief(cs.min_margin));
  } else {
    r.warnings.push_back("fewer than two samples; pair scans skipped");
  }

  if (r.d() == 3) {
    // The default partner is the anchor itself: x = γ⁺, y = γ⁻.
    const std::size_t ai = sample_index(r, cloud, "anchor", 0);
    const std::size_t pi = sample_index(r, cloud, "partner", ai);
    const FlagSample& a = cloud.samples[ai];
    const FlagSample& p = cloud.samples[pi];
    const ChartFrame frame = m == 2 ? build_chart(a, p)
                                    : build_chart(flag_sample(r.rep, a.witness, 2, r.param("gap_tol")),
                                                  flag_sample(r.rep, p.witness, 2, r.param("gap_tol")));
    std::ostringstream csv;
    const std::vector<ChartPoint> points = chart_points(frame, cloud, csv);
    r.out.write("chart.csv", csv.str());
    r.out.write("chart.svg", chart_svg(points, r.cfg.name + ": anchor " + a.word + ", partner " + p.word));
    r.witnesses["chart"] = {{"anchor", a.word}, {"partner", p.word}};
    r.estimates["chart_points"] = points.size();
  }
}

void run_hyperconvex(Run& r) {
  const int m = r.param("m");
  const Ball ball = compute_ball(r.rep, r.cfg.radius);
  const LimitCloud cloud = r.cloud(ball, m, kDefaultGapTol);
  const double sep_tol = r.param("sep_tol");
  const double margin_tol = r.param("margin_tol");
  r.tolerances["sep_tol"] = sep_tol;
  r.tolerances["margin_tol"] = margin_tol;
  const HyperconvexityReport hc = hyperconvexity_scan(cloud, m, r.param("triples"), *r.cfg.seed, sep_tol);
  std::ostringstream csv;
  csv << "x,z,y,margin\n";
  for (const auto& t : hc.triples) {
    csv << cloud.samples[t.x].word << ',' << cloud.samples[t.z].word << ',' << cloud.samples[t.y].word
        << ',' << fmt(t.margin) << '\n';
  }
  r.out.write("triples.csv", csv.str());
  r.estimates["hyperconvexity"] = {{"min_margin", hc.min_margin}, {"triples", hc.triples.size()}};
  r.witnesses["hyperconvexity"] = {{"x", cloud.samples[hc.worst.x].word},
                                   {"z", cloud.samples[hc.worst.z].word},
                                   {"y", cloud.samples[hc.worst.y].word}};
  r.verdict("hyperconvexity", hc.min_margin > margin_tol, "min margin " + brief(hc.min_margin));
}

void run_hoelder(Run& r) {
  const int m = r.param("m");
  const Ball ball = compute_ball(r.rep, r.cfg.radius);
  const LimitCloud cloud = r.cloud(ball, m, kDefaultGapTol);
  HoelderOptions opts;
  opts.delta_min = r.param("delta_min");
  opts.delta_max = r.param("delta_max");
  opts.metric = r.param("metric") == "chordal" ? Metric::Chordal : Metric::Sine;
  r.tolerances["delta_min"] = opts.delta_min;
  r.tolerances["delta_max"] = opts.delta_max;
  r.tolerances["distance_floor"] = opts.floor;
  const std::size_t n = std::min(r.param("anchors").get<std::size_t>(), cloud.samples.size());
  const Json& expected = r.param("expected");
  std::ostringstream csv;
  csv << "anchor,delta,distance\n";
  Json fits = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const FlagSample& anchor = cloud.samples[i];
    const HoelderFit fit = hoelder_regression(cloud, anchor, opts);
    for (const auto& p : fit.scatter) csv << anchor.word << ',' << fmt(p.delta) << ',' << fmt(p.distance) << '\n';
    Json entry = {{"anchor", anchor.word},
                  {"slope", fit.slope},
                  {"intercept", fit.intercept},
                  {"r2", fit.r2},
                  {"n_points", fit.n_points},
                  {"n_floored", fit.n_floored}};
    try {
      entry["tangency_max_angle"] = tangency_check(cloud, anchor).max_angle_nearest;
    } catch (const Error&) {
      entry["tangency_max_angle"] = nullptr;
    }
    fits.push_back(entry);
    if (!expected.is_null()) {
      const double lo = expected[0], hi = expected[1];
      r.verdict("slope at " + anchor.word, fit.slope >= lo && fit.slope <= hi,
                "slope " + brief(fit.slope) + " against [" + brief(lo) + ", " + brief(hi) + "]");
    }
  }
  r.estimates["hoelder"] = fits;
  r.estimates["caveat"] = kHoelderCaveat;
  r.out.write("scatter.csv", csv.str());
}

void run_cones(Run& r) {
  const int n_min = r.param("n_min");
  const Ball ball = compute_ball(r.rep, r.cfg.radius);
  const ConeReport cr = cone_diagnostic(ball, n_min);
  r.estimates["cones"] = {{"max_distance", cr.max_distance},
                          {"mean_distance", cr.mean_distance},
                          {"count", cr.count},
                          {"degenerate", cr.degenerate}};
  if (cr.degenerate) r.warnings.push_back("degenerate: all Cartan and Jordan vectors vanish");
  const Json& max_mean = r.param("max_mean");
  if (!max_mean.is_null()) {
    r.tolerances["max_mean"] = max_mean;
    r.verdict("mean cone distance", cr.mean_distance <= max_mean.get<double>(),
              "mean " + brief(cr.mean_distance));
  }
  r.spectra_csv(ball, ratio_index(r.cfg, r.d()));
}

void run_gelfand(Run& r) {
  const int index = r.param("index");
  const int powers = r.param("powers");
  const double tol = r.param("tol");
  r.tolerances["gelfand_tol"] = tol;
  std::vector<std::string> words;
  for (const auto& w : r.param("words")) words.push_back(w);
  if (words.empty()) words = r.rep.generators().base_labels();
  std::ostringstream csv;
  csv << "word,k,growth,error\n";
  Json results = Json::array();
  for (const auto& text : words) {
    const std::vector<int> w = parse_word(r.rep.generators(), text);
    const GelfandSequence seq = gelfand_check(evaluate_word(r.rep.generators(), w), index, powers);
    for (std::size_t k = 0; k < seq.growth.size(); ++k) {
      csv << text << ',' << k + 1 << ',' << fmt(seq.growth[k]) << ',' << fmt(seq.errors[k]) << '\n';
    }
    const double err = seq.errors.empty() ? 0.0 : seq.errors.back();
    results.push_back({{"word", text}, {"log_lambda", seq.log_lambda}, {"final_error", err}});
    r.verdict("gelfand " + text, err < tol, "error " + brief(err) + " at k=" + std::to_string(powers));
  }
  r.estimates["gelfand"] = results;
  r.out.write("gelfand.csv", csv.str());
}

void run_perturb_sweep(Run& r) {
  const int k = r.param("k");
  const Json& mj = r.param("m");
  std::ostringstream csv;
  csv << "eps,slope,intercept,r2,linear,alpha_m\n";
  Json rows = Json::array();
  for (const auto& ej : r.param("eps")) {
    const double eps = ej;
    const Representation p = perturb_rep(r.rep, eps, *r.cfg.seed);
    const Ball ball = compute_ball(p, r.cfg.radius);
    const GapProfile gp = gap_profile(ball, k);
    double alpha = std::numeric_limits<double>::quiet_NaN();
    if (!mj.is_null()) alpha = alpha_m_estimate(ball, mj.get<int>()).value;
    csv << fmt(eps) << ',' << fmt(gp.fit.slope) << ',' << fmt(gp.fit.intercept) << ',' << fmt(gp.fit.r2)
        << ',' << (gp.linear_growth ? 1 : 0) << ',' << fmt(alpha) << '\n';
    Json row = {{"eps", eps}, {"slope", gp.fit.slope}, {"r2", gp.fit.r2}, {"linear", gp.linear_growth}};
    if (!mj.is_null()) row["alpha_m"] = number_json(alpha);
    rows.push_back(row);
    r.verdict("k=" + std::to_string(k) + " gap at eps " + brief(eps), gp.linear_growth, gp.verdict);
  }
  r.estimates["sweep"] = rows;
  r.out.write("sweep.csv", csv.str());
}

}  // namespace

void write_spectra_csv(std::ostream& os, const Ball& ball, int m) {
  if (ball.spectra.empty()) throw Error("empty ball");
  const int d = static_cast<int>(ball.spectra.front().mu.size());
  const bool ratio = m >= 2 && m <= d - 1;
  os << "word,length";
  for (int i = 1; i <= d; ++i) os << ",mu_" << i;
  for (int i = 1; i <= d; ++i) os << ",lambda_" << i;
  os << ",ratio_m\n";
  for (std::size_t e = 0; e < ball.elements.size(); ++e) {
    const auto& el = ball.elements[e];
    const auto& s = ball.spectra[e];
    os << (ball.generators ? format_word(*ball.generators, el.word) : std::string()) << ',' << el.length();
    for (int i = 0; i < d; ++i) os << ',' << format_number(s.mu[i]);
    for (int i = 0; i < d; ++i) os << ',' << format_number(s.lambda[i]);
    os << ',' << (ratio ? format_number(alpha_ratio(s, m)) : std::string()) << '\n';
  }
}

void write_cloud_csv(std::ostream& os, const LimitCloud& cloud) {
  const int d = cloud.dim;
  const int m = cloud.m;
  os << "word,length";
  for (int i = 1; i <= d; ++i) os << ",xi1_" << i;
  frame_header(os, "xim_plus", d, m);
  frame_header(os, "xi_dm_minus", d, d - m);
  frame_header(os, "xi_d1_minus", d, d - 1);
  os << '\n';
  for (const auto& s : cloud.samples) {
    os << s.word << ',' << s.witness.length();
    const Vector v = sign_fixed(s.xi1_plus);
    for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << format_number(v[i]);
    write_frame(os, s.xim_plus);
    write_frame(os, s.xi_dm_minus);
    write_frame(os, s.xi_d1_minus);
    os << '\n';
  }
}

std::string chart_svg(const std::vector<ChartPoint>& points, const std::string& title) {
  constexpr double kSize = 600.0;
  constexpr double kPad = 40.0;
  std::vector<double> xs{0.0}, ys{0.0};
  for (const auto& p : points) {
    xs.push_back(p.u.size() > 0 ? p.u[0] : p.w[0]);
    ys.push_back(p.u.size() > 0 ? p.w[0] : p.w[1]);
  }
  double x0 = std::min(0.0, percentile(xs, 0.05)), x1 = std::max(0.0, percentile(xs, 0.95));
  double y0 = std::min(0.0, percentile(ys, 0.05)), y1 = std::max(0.0, percentile(ys, 0.95));
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  x0 -= 0.05 * span;
  x1 += 0.05 * span;
  y0 -= 0.05 * span;
  y1 += 0.05 * span;
  const double inner = kSize - 2 * kPad;
  auto px = [&](double x) { return kPad + (x - x0) / (x1 - x0) * inner; };
  auto py = [&](double y) { return kSize - kPad - (y - y0) / (y1 - y0) * inner; };

  std::string escaped;
  for (char c : title) {
    if (c == '<') escaped += "&lt;";
    else if (c == '>') escaped += "&gt;";
    else if (c == '&') escaped += "&amp;";
    else escaped += c;
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
  os << "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"" << kPad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escaped
     << "</text>\n";
  os << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << inner << "\" height=\"" << inner
     << "\" fill=\"none\" stroke=\"#999\"/>\n";
  os << "<g fill=\"#1f4e9a\">\n";
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < x0 || xs[i] > x1 || ys[i] < y0 || ys[i] > y1) continue;
    os << "<circle cx=\"" << fixed(px(xs[i])) << "\" cy=\"" << fixed(py(ys[i])) << "\" r=\"1.5\"/>\n";
  }
  os << "</g>\n";
  // The tangent line at the anchor is the first chart axis.
  const double half = 0.2 * (x1 - x0);
  os << "<line x1=\"" << fixed(px(-half)) << "\" y1=\"" << fixed(py(0.0)) << "\" x2=\"" << fixed(px(half))
     << "\" y2=\"" << fixed(py(0.0)) << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
  os << "<circle cx=\"" << fixed(px(0.0)) << "\" cy=\"" << fixed(py(0.0))
     << "\" r=\"4\" fill=\"#c0392b\"/>\n";
  os << "<text x=\"" << kPad << "\" y=\"" << kSize - 12 << "\" font-family=\"sans-serif\" font-size=\"12\">"
     << "x [" << fixed(x0) << ", " << fixed(x1) << "]  y [" << fixed(y0) << ", " << fixed(y1) << "]</text>\n";
  os << "</svg>\n";
  return os.str();
}

RunResult run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Representation rep = Representation::from_recipe(config.recipe);
  Outputs out(config.out_dir);
  Run r(config, rep, out);
  r.tolerances["ball_dedup_tol"] = BallOptions{}.dedup_tol;

  if (config.kind == "certify") {
    run_certify(r);
  } else if (config.kind == "alpha") {
    run_alpha(r);
  } else if (config.kind == "limitset") {
    run_limitset(r);
  } else if (config.kind == "hyperconvex") {
    run_hyperconvex(r);
  } else if (config.kind == "hoelder") {
    run_hoelder(r);
  } else if (config.kind == "cones") {
    run_cones(r);
  } else if (config.kind == "gelfand") {
    run_gelfand(r);
  } else if (config.kind == "perturb-sweep") {
    run_perturb_sweep(r);
  } else {
    throw Error("unknown experiment kind " + config.kind);
  }

  RunResult result;
  result.exit_code = r.negative() ? kExitNegative : kExitOk;
  std::vector<std::string> artifacts = out.names();
  artifacts.push_back("summary.json");
  Json& s = result.summary;
  s["schema_version"] = kSummarySchemaVersion;
  s["tool"] = {{"name", "anosov-lab"}, {"version", tool_version()}};
  s["config"] = {{"name", config.name}, {"hash", config_hash(config)}};
  s["experiment"] = {{"kind", config.kind}, {"parameters", config.params}};
  s["representation"] = {{"dim", rep.dim()},
                         {"generators", rep.generators().base_labels()},
                         {"chain", describe(config.recipe.chain)}};
  s["radius"] = config.radius;
  s["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
  s["tolerances"] = r.tolerances;
  s["verdicts"] = r.verdicts;
  s["pass"] = !r.negative();
  s["estimates"] = r.estimates;
  s["witnesses"] = r.witnesses;
  s["warnings"] = r.warnings;
  s["artifacts"] = artifacts;
  s["exit_code"] = result.exit_code;
  s["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.write("summary.json", s.dump(2) + "\n");
  result.artifacts = artifacts;
  return result;
}

std::filesystem::path example_dir() {
  if (const char* env = std::getenv("ANOSOV_LAB_CONFIG_DIR")) {
    if (*env) return env;
  }
  return ANOSOV_LAB_CONFIG_DIR;
}

std::vector<ExampleEntry> example_catalog() {
  static const std::pair<const char*, const char*> entries[] = {
      {"fuchsian_tau3", "Hitchin/Veronese: tau_3 of a Fuchsian pair, alpha_2 = 2"},
      {"tau5_plus_tau2", "tau_5 + tau_2 over a Schottky pair, alpha_2 = 3/2"},
      {"tau_d_plus_tau_d2", "tau_4 + tau_6: 1-Anosov, gap at index 2 collapses"},
      {"su21_9dim", "9-dimensional SU(2,1) example: 1-Anosov, not 4-Anosov"},
      {"schottky_sl2", "gap certification for a Schottky pair in SL_2"},
  };
  std::vector<ExampleEntry> out;
  const std::filesystem::path dir = example_dir();
  for (const auto& [name, description] : entries) {
    out.push_back({name, description, dir / (std::string(name) + ".json")});
  }
  return out;
}

}  // namespace anosov
