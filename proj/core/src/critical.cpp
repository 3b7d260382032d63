#include "percolab/critical.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "percolab/csv.hpp"
#include "percolab/errors.hpp"

namespace percolab {

namespace {

class Bisector {
 public:
  Bisector(const Graph& g, const PcOptions& opt, std::uint64_t seed, double target, double z, PcResult& out)
      : g_(g), opt_(opt), seed_(seed), target_(target), z_(z), out_(out) {}

  bool exhausted() const noexcept { return exhausted_; }

  // -1 / +1 when the CI for chi(p) - target excludes zero, 0 otherwise.
  int evaluate(double p) {
    auto& m = cache_[p];
    const ObservableSpec spec{Observable::kChi};
    std::uint64_t n = m.rows();
    if (n == 0) {
      if (!reserve(opt_.initial_samples)) return 0;
      m = sample(p, spec, 0, opt_.initial_samples);
    }
    for (;;) {
      const Estimate e = m.mean(0);
      const double diff = e.mean - target_;
      int decision = 0;
      if (std::abs(diff) > z_ * e.std_error && diff != 0.0) decision = diff < 0 ? -1 : 1;
      n = m.rows();
      const bool can_grow = 2 * n <= opt_.max_samples_per_point;
      if (decision != 0 || !can_grow || !reserve(n)) {
        out_.trace.push_back({p, e, decision});
        return decision;
      }
      m.append(sample(p, spec, n, n));
    }
  }

 private:
  bool reserve(std::uint64_t n) {
    if (out_.total_samples + n > opt_.budget) {
      exhausted_ = true;
      return false;
    }
    out_.total_samples += n;
    return true;
  }

  ReplicaMatrix sample(double p, const ObservableSpec& spec, std::uint64_t first, std::uint64_t n) {
    RunOptions run = opt_.run;
    run.first_replica = first;
    return sample_observables(g_, p, {&spec, 1}, n, seed_, run);
  }

  const Graph& g_;
  const PcOptions& opt_;
  std::uint64_t seed_;
  double target_;
  double z_;
  PcResult& out_;
  std::map<double, ReplicaMatrix> cache_;
  bool exhausted_ = false;
};

}  // namespace

PcResult solve_pc(const Graph& g, const PcOptions& opt, std::uint64_t seed) {
  const double V = static_cast<double>(g.V());
  const double target = opt.lambda * std::pow(V, opt.exponent);
  if (!(target > 1.0 && target < V)) {
    throw InvalidParameter("target chi = lambda V^{1/3} = " + format_double(target) + " must lie strictly in (1, V=" +
                           format_double(V) + ")");
  }
  if (!(opt.rel_tol > 0.0)) throw InvalidParameter("rel_tol must be positive");
  if (!(opt.confidence > 0.0 && opt.confidence < 1.0)) throw InvalidParameter("confidence must lie in (0, 1)");
  if (opt.initial_samples < 2) throw InvalidParameter("initial_samples must be at least 2");

  PcResult r;
  r.graph = g.spec();
  r.lambda = opt.lambda;
  r.target_chi = target;
  r.confidence = opt.confidence;
  r.rel_tol = opt.rel_tol;
  r.seed = seed;

  // Bonferroni over the number of comparisons a full descent can make.
  const double depth = std::max(1.0, std::ceil(std::log2(static_cast<double>(g.degree()) / opt.rel_tol))) + 4.0;
  const double alpha = (1.0 - opt.confidence) / depth;
  const double z = boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);

  Bisector bisect(g, opt, seed, target, z, r);
  double lo = 0.0, hi = 1.0;
  const double warm = 1.0 / static_cast<double>(g.degree());
  double p = (warm > 0.0 && warm < 1.0) ? warm : 0.5;
  double centre = -1.0;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo < opt.rel_tol * mid) {
      r.converged = true;
      break;
    }
    const int d = bisect.evaluate(p);
    if (bisect.exhausted()) break;
    if (d < 0) {
      lo = p;
    } else if (d > 0) {
      hi = p;
    } else {
      centre = p;
      const double a = 0.5 * (lo + p), b = 0.5 * (p + hi);
      const bool moved_lo = bisect.evaluate(a) < 0;
      if (moved_lo) lo = a;
      if (bisect.exhausted()) break;
      const bool moved_hi = bisect.evaluate(b) > 0;
      if (moved_hi) hi = b;
      if (bisect.exhausted() || (!moved_lo && !moved_hi)) break;
      continue;  // keep probing around the same centre
    }
    p = 0.5 * (lo + hi);
  }
  r.ci_lo = lo;
  r.ci_hi = hi;
  r.p_c_hat = (centre >= lo && centre <= hi) ? centre : 0.5 * (lo + hi);
  if (hi - lo < opt.rel_tol * 0.5 * (lo + hi)) r.converged = true;
  return r;
}

std::string pc_to_json(const PcResult& r) {
  nlohmann::ordered_json j;
  j["graph"] = r.graph;
  j["p_c_hat"] = r.p_c_hat;
  j["ci_lo"] = r.ci_lo;
  j["ci_hi"] = r.ci_hi;
  j["lambda"] = r.lambda;
  j["target_chi"] = r.target_chi;
  j["confidence"] = r.confidence;
  j["rel_tol"] = r.rel_tol;
  j["seed"] = r.seed;
  j["total_samples"] = r.total_samples;
  j["converged"] = r.converged;
  auto trace = nlohmann::ordered_json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"p", t.p},
                     {"chi", t.chi.mean},
                     {"stderr", t.chi.std_error},
                     {"n_samples", t.chi.n_samples},
                     {"decision", t.decision}});
  }
  j["trace"] = std::move(trace);
  return j.dump(2);
}

PcResult pc_from_json(const std::string& text) {
  PcResult r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.graph = j.at("graph").get<std::string>();
    r.p_c_hat = j.at("p_c_hat").get<double>();
    r.ci_lo = j.at("ci_lo").get<double>();
    r.ci_hi = j.at("ci_hi").get<double>();
    r.lambda = j.at("lambda").get<double>();
    r.target_chi = j.at("target_chi").get<double>();
    r.confidence = j.value("confidence", 0.0);
    r.rel_tol = j.value("rel_tol", 0.0);
    r.seed = j.value("seed", std::uint64_t{0});
    r.total_samples = j.value("total_samples", std::uint64_t{0});
    r.converged = j.value("converged", false);
    if (j.contains("trace")) {
      for (const auto& t : j.at("trace")) {
        PcTracePoint pt;
        pt.p = t.at("p").get<double>();
        pt.chi.mean = t.at("chi").get<double>();
        pt.chi.std_error = t.at("stderr").get<double>();
        pt.chi.n_samples = t.at("n_samples").get<std::uint64_t>();
        pt.chi.seed = r.seed;
        pt.decision = t.at("decision").get<int>();
        r.trace.push_back(pt);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed p_c JSON: ") + e.what());
  }
  return r;
}

std::string_view window_class_name(WindowClass c) {
  switch (c) {
    case WindowClass::kBelow: return "below";
    case WindowClass::kInside: return "inside";
    case WindowClass::kAbove: return "above";
  }
  return "inside";
}

WindowParams window_params(const Graph& g, double p, const PcResult& pc, double below_thresh, double above_thresh) {
  if (!(below_thresh > 0.0 && above_thresh > 0.0)) throw InvalidParameter("window thresholds must be positive");
  WindowParams w;
  w.p = p;
  w.p_c = pc.p_c_hat;
  w.Omega = g.degree();
  w.V = g.V();
  w.lambda = pc.lambda;
  w.eps = static_cast<double>(w.Omega) * (p - pc.p_c_hat);
  w.Lambda = w.eps * std::cbrt(static_cast<double>(w.V));
  w.eps0 = pc.lambda > 0.0 ? eps0_of(g, pc.lambda) : 0.0;
  if (w.Lambda < -below_thresh) {
    w.classification = WindowClass::kBelow;
  } else if (w.Lambda > above_thresh) {
    w.classification = WindowClass::kAbove;
  } else {
    w.classification = WindowClass::kInside;
  }
  return w;
}

double p_from_Lambda(const Graph& g, double p_c, double Lambda) {
  return p_c + Lambda / (static_cast<double>(g.degree()) * std::cbrt(static_cast<double>(g.V())));
}

double p_from_eps(const Graph& g, double p_c, double eps) { return p_c + eps / static_cast<double>(g.degree()); }

double eps0_of(const Graph& g, double lambda) { return 1.0 / (lambda * std::cbrt(static_cast<double>(g.V()))); }

}  // namespace percolab
