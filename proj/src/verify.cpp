#include "intdim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "intdim/errors.hpp"
#include "intdim/format.hpp"
#include "intdim/kernels.hpp"
#include "intdim/parallel.hpp"

namespace intdim {

namespace {

constexpr double kRoundoff = 1e-12;
constexpr double kSeMultiplier = 3.0;

std::string pair_label(double t, double s) {
  return "t=" + format_fixed(t, 6) + ",s=" + format_fixed(s, 6);
}

std::string scale_label(double r, double theta) {
  return "r=" + format_number(r) + ",theta=" + format_number(theta);
}

/// w' G w summed over the support of w.
double energy_of(const Cloud& cloud, const KernelSpec& spec, const Eigen::VectorXd& w) {
  const KernelEvaluator<double> k(spec);
  std::vector<Eigen::Index> supp;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) > 0.0) supp.push_back(i);
  const auto& pts = cloud.points();
  double e = 0.0;
  for (std::size_t a = 0; a < supp.size(); ++a) {
    const Eigen::Index i = supp[a];
    e += w(i) * w(i);
    for (std::size_t b = a + 1; b < supp.size(); ++b) {
      const Eigen::Index j = supp[b];
      e += 2.0 * w(i) * w(j) * k((pts.row(i) - pts.row(j)).norm());
    }
  }
  return e;
}

double diameter(const Cloud& cloud) {
  const auto& pts = cloud.points();
  double best = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = i + 1; j < pts.rows(); ++j)
      best = std::max(best, (pts.row(i) - pts.row(j)).squaredNorm());
  return std::sqrt(best);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// Regularized lower incomplete gamma P(a, y) for a a positive half-integer.
double lower_gamma_half(double a, double y) {
  if (y <= 0.0) return 0.0;
  if (y < a + 1.0) {
    double term = 1.0 / a, sum = term;
    for (int k = 1; k < 500 && term > sum * 1e-17; ++k) {
      term *= y / (a + k);
      sum += term;
    }
    return std::exp(a * std::log(y) - y - std::lgamma(a)) * sum;
  }
  double p = std::fmod(a, 1.0) == 0.0 ? -std::expm1(-y) : std::erf(std::sqrt(y));
  for (double b = std::fmod(a, 1.0) == 0.0 ? 1.0 : 0.5; b < a; b += 1.0)
    p -= std::exp(b * std::log(y) - y - std::lgamma(b + 1.0));
  return p;
}

/// Running moments for one Monte Carlo integrand.
struct Moments {
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double v) {
    sum += v;
    sumsq += v * v;
  }
  double mean(long n) const { return sum / static_cast<double>(n); }
  double relative_se(long n) const {
    const double m = mean(n);
    if (m <= 0.0) return std::numeric_limits<double>::infinity();
    const double var = std::max(sumsq / static_cast<double>(n) - m * m, 0.0);
    return std::sqrt(var / static_cast<double>(n)) / m;
  }
};

void validate_mc(const MonteCarloOptions& mc) {
  detail::require(mc.trials >= 1000, "trials", "must be at least 1000");
  detail::require(mc.max_trials >= mc.trials, "max_trials", "must be at least trials");
  detail::require(mc.target_se > 0.0, "target_se", "must be positive");
}

void validate_scales(const std::vector<double>& r_values) {
  detail::require(!r_values.empty(), "r_values", "must be non-empty");
  for (double r : r_values) detail::require(r > 0.0 && r < 1.0, "r_values", "must lie in (0,1)");
}

/// Draws samples of one random variable until every integrand meets the target error.
/// `sample` fills one draw; `integrands` maps a draw to each integrand's value.
template <typename Draw, typename Eval>
long run_adaptive(const MonteCarloOptions& mc, std::size_t count, std::vector<Moments>& moments,
                  Draw draw, Eval eval) {
  moments.assign(count, {});
  long done = 0;
  long target = mc.trials;
  std::mt19937_64 rng(mc.seed);
  while (true) {
    for (; done < target; ++done) {
      const double v = draw(rng);
      for (std::size_t i = 0; i < count; ++i) moments[i].add(eval(i, v));
    }
    bool ok = true;
    for (const auto& m : moments)
      if (!(m.relative_se(done) <= mc.target_se)) ok = false;
    if (ok || target >= mc.max_trials) return done;
    target = std::min(target * 2, mc.max_trials);
  }
}

/// Bracket from the coarsest scale and containment of every finer ratio.
void bracket_checks(BracketReport& rep, double target_se) {
  double coarse = 0.0;
  for (const auto& smp : rep.samples) coarse = std::max(coarse, smp.r);
  rep.lower = std::numeric_limits<double>::infinity();
  rep.upper = 0.0;
  double se_lower = 0.0, se_upper = 0.0;
  for (const auto& smp : rep.samples) {
    if (smp.r != coarse) continue;
    if (smp.ratio < rep.lower) {
      rep.lower = smp.ratio;
      se_lower = smp.relative_se;
    }
    if (smp.ratio > rep.upper) {
      rep.upper = smp.ratio;
      se_upper = smp.relative_se;
    }
  }
  for (const auto& smp : rep.samples) {
    const std::string label = "r=" + format_number(smp.r) + ",|x|=" + format_number(smp.distance);
    rep.check.add(label + ":se", smp.relative_se - target_se,
                  "relative_se=" + format_number(smp.relative_se) + " trials=" + std::to_string(smp.trials));
    if (smp.r == coarse) continue;
    const double lo = rep.lower * (1.0 - kSeMultiplier * se_lower);
    const double hi = rep.upper * (1.0 + kSeMultiplier * se_upper);
    const double x_lo = smp.ratio * (1.0 - kSeMultiplier * smp.relative_se);
    const double x_hi = smp.ratio * (1.0 + kSeMultiplier * smp.relative_se);
    rep.check.add(label + ":bracket", std::max(lo - x_hi, x_lo - hi) / smp.ratio,
                  "ratio=" + format_number(smp.ratio) + " bracket=[" + format_number(rep.lower) + "," +
                      format_number(rep.upper) + "]");
  }
}

}  // namespace

void CheckReport::add(std::string instance, double margin, std::string note) {
  ++instances;
  worst_margin = std::max(worst_margin, margin);
  if (std::isnan(margin)) worst_margin = margin;
  pass = worst_margin <= 0.0;
  details.push_back({std::move(instance), margin, std::move(note)});
}

void CheckReport::merge(const CheckReport& other, const std::string& prefix) {
  for (const auto& d : other.details) add(prefix + "/" + d.instance, d.margin, d.note);
}

double dyadic_slack(int ambient_dim) { return std::pow(4.0, ambient_dim); }

std::vector<std::pair<double, double>> random_exponent_pairs(int count, double upper, std::uint64_t seed) {
  detail::require(count >= 0, "pairs", "must be nonnegative");
  detail::require(upper >= 0.0, "upper", "must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, upper);
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < count; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    out.emplace_back(a, b);
  }
  out.emplace_back(upper / 2.0, upper / 2.0);
  return out;
}

CheckReport check_sum_lipschitz(const Cloud& cloud, double r, double theta,
                                const std::vector<std::pair<double, double>>& s_pairs, int phases) {
  detail::require(r > 0.0 && r < 1.0, "r", "must lie in (0,1)");
  detail::require(theta > 0.0 && theta <= 1.0, "theta", "must lie in (0,1]");
  const int n = cloud.ambient_dim();
  CheckReport rep;
  rep.name = "sum_lipschitz";
  const CoverSum sums(cloud, r, theta, phases);

  // Inexact families use diameters outside [r, r^theta]; the bounds follow the diameters used.
  double low = r, high = std::pow(r, theta);
  for (const auto& fam : sums.families()) {
    low = std::min(low, fam.diameter(fam.levels().finest));
    high = std::max(high, fam.diameter(fam.levels().coarsest));
  }
  const double scale = -std::log(r);
  for (const auto& [t, s] : s_pairs) {
    detail::require(t <= s && t >= 0.0 && s <= n, "s_pairs", "need 0 <= t <= s <= n");
    const double d = (std::log(sums.value(s)) - std::log(sums.value(t))) / scale;
    const double lower = (s - t) * std::log(low) / scale;
    const double upper = (s - t) * std::log(high) / scale;
    rep.add(pair_label(t, s), std::max(lower - d, d - upper) - kRoundoff,
            "quotient=" + format_number(d) + " bounds=[" + format_number(lower) + "," + format_number(upper) + "]");
  }
  return rep;
}

CheckReport check_capacity_lipschitz(const Cloud& cloud, double r, double theta, int m,
                                     const std::vector<std::pair<double, double>>& s_pairs,
                                     const EquilibriumOptions& solver) {
  std::map<double, std::size_t> index;
  for (const auto& [t, s] : s_pairs) {
    detail::require(t <= s && t >= 0.0 && s <= m, "s_pairs", "need 0 <= t <= s <= m");
    index.emplace(t, 0);
    index.emplace(s, 0);
  }
  std::vector<double> exps;
  for (auto& [e, i] : index) {
    i = exps.size();
    exps.push_back(e);
  }
  auto spec_for = [&](double s) { return KernelSpec{r, theta, s, m, KernelVariant::Full}; };
  for (double e : exps) spec_for(e).validate(cloud.ambient_dim());

  std::vector<EquilibriumResult> eq(exps.size());
  if (theta == 1.0) {
    // the kernel does not depend on s
    const EquilibriumResult one = capacity(cloud, spec_for(0.0), solver);
    std::fill(eq.begin(), eq.end(), one);
  } else {
    parallel_for(exps.size(), [&](std::size_t i) { eq[i] = capacity(cloud, spec_for(exps[i]), solver); });
  }

  // A solve stuck above another exponent's weights is restarted from them.
  auto improve = [&](std::size_t target, std::size_t from) {
    const KernelSpec spec = spec_for(exps[target]);
    if (energy_of(cloud, spec, eq[from].weights) >= eq[target].energy) return false;
    EquilibriumOptions warm = solver;
    warm.warm_start = eq[from].weights;
    EquilibriumResult next = capacity(cloud, spec, warm);
    if (next.energy >= eq[target].energy) return false;
    eq[target] = std::move(next);
    return true;
  };
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (const auto& [t, s] : s_pairs) {
      const std::size_t it = index[t], is = index[s];
      if (it == is) continue;
      const double c_t = eq[it].capacity, c_s = eq[is].capacity;
      if (c_t > c_s) changed |= improve(is, it);
      if (std::pow(r, (s - t) * (1.0 - theta)) * c_s > c_t) changed |= improve(it, is);
    }
    if (!changed) break;
  }

  CheckReport rep;
  rep.name = "capacity_lipschitz";
  const double slack = 10.0 * solver.tol;
  for (const auto& [t, s] : s_pairs) {
    const auto& et = eq[index[t]];
    const auto& es = eq[index[s]];
    const double c_t = et.capacity, c_s = es.capacity;
    const double upper = (c_t - c_s) / c_s - slack;
    const double lower = (std::pow(r, (s - t) * (1.0 - theta)) * c_s - c_t) / c_t - slack;
    rep.add(pair_label(t, s), std::max(upper, lower),
            "C_t=" + format_number(c_t) + " C_s=" + format_number(c_s) +
                " kkt_gap=" + format_number(std::max(et.kkt_gap, es.kkt_gap)));
  }
  return rep;
}

CheckReport check_sandwich(const Cloud& cloud, double theta, double s, const ScaleSchedule& sched,
                           const SandwichOptions& opt) {
  const int n = cloud.ambient_dim();
  detail::require(s >= 0.0 && s <= n, "s", "must lie in [0,n]");
  sched.validate();
  const ScaleSchedule& bound = sched;
  const double c = dyadic_slack(n);
  const double extent = diameter(cloud);

  const std::size_t k = bound.r_values.size();
  std::vector<double> sums(k), caps(k), gaps(k);
  parallel_for(k, [&](std::size_t i) {
    const double r = bound.r_values[i];
    sums[i] = CoverSum(cloud, r, theta, opt.phases).value(s);
    const EquilibriumResult eq = capacity(cloud, {r, theta, s, n, KernelVariant::Full}, opt.solver);
    caps[i] = eq.capacity;
    gaps[i] = eq.kkt_gap;
  });

  CheckReport rep;
  rep.name = "sandwich";
  std::vector<double> log_inv_r, log_a;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = bound.r_values[i];
    const double rs_c = std::pow(r, s) * caps[i];
    const double factor = extent > 0.0 ? std::max(1.0, std::ceil(std::log2(extent / r) + 1.0)) : 1.0;
    const double a = sums[i] / (factor * rs_c);
    log_inv_r.push_back(-std::log(r));
    log_a.push_back(std::log(a));
    rep.add(scale_label(r, theta) + ":left", (rs_c / c - sums[i]) / sums[i],
            "S=" + format_number(sums[i]) + " C=" + format_number(caps[i]) + " A=" + format_number(a) +
                " kkt_gap=" + format_number(gaps[i]));
  }
  if (k >= 2) {
    const double slope = ls_slope(log_inv_r, log_a);
    rep.add("theta=" + format_number(theta) + ",s=" + format_number(s) + ":trend",
            std::abs(slope) - opt.max_trend, "slope=" + format_number(slope));
  }
  return rep;
}

BracketReport check_kernel_comparison(const std::vector<double>& branch_positions,
                                      const std::vector<double>& r_values, double theta, double s,
                                      int m, int n, const MonteCarloOptions& mc) {
  detail::require(n >= 2, "n", "must be at least 2");
  detail::require(m >= 1 && m < n, "m", "must satisfy 1 <= m < n");
  detail::require(s >= 0.0 && s < m, "s", "must satisfy 0 <= s < m");
  detail::require(theta > 0.0 && theta <= 1.0, "theta", "must lie in (0,1]");
  detail::require(!branch_positions.empty(), "x_samples", "must be non-empty");
  validate_mc(mc);
  validate_scales(r_values);

  struct Point {
    double r, distance, phi;
    KernelEvaluator<double> inner;
  };
  std::vector<Point> points;
  for (double r : r_values) {
    const KernelEvaluator<double> full(KernelSpec{r, theta, s, m, KernelVariant::Full});
    const KernelEvaluator<double> trunc(KernelSpec{r, theta, s, m, KernelVariant::Truncated});
    for (double u : branch_positions) {
      const double d = std::pow(r, 1.0 - u * (1.0 - theta));
      points.push_back({r, d, full(d), trunc});
    }
  }

  // |pi_V x| = |x| |pi_V e_1|, and |pi_V e_1| has the law of the first m coordinates of a
  // uniform unit vector.
  std::normal_distribution<double> normal;
  auto draw = [&](std::mt19937_64& rng) {
    double head = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = normal(rng);
      total += g * g;
      if (i < m) head += g * g;
    }
    return std::sqrt(head / total);
  };
  auto eval = [&](std::size_t i, double rho) { return points[i].inner(points[i].distance * rho); };
  std::vector<Moments> moments;
  const long trials = run_adaptive(mc, points.size(), moments, draw, eval);

  BracketReport rep;
  rep.check.name = "kernel_comparison";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double mean = moments[i].mean(trials);
    rep.samples.push_back({points[i].r, points[i].distance, points[i].phi / mean,
                           moments[i].relative_se(trials), trials});
  }
  bracket_checks(rep, mc.target_se);
  return rep;
}

double slab_integral_exact(double distance, double r, int m, int n) {
  const double a = distance > 0.0 ? r / distance : std::numeric_limits<double>::infinity();
  if (n == 2 && m == 1) return a >= 1.0 ? 1.0 : 2.0 / std::numbers::pi * std::asin(a);
  if (n == 3 && m == 1) return std::min(1.0, a);
  if (n == 3 && m == 2) return a >= 1.0 ? 1.0 : 1.0 - std::sqrt(1.0 - a * a);
  return std::nan("");
}

BracketReport check_slab_integral(const std::vector<double>& x_over_r,
                                  const std::vector<double>& r_values, int m, int n,
                                  const MonteCarloOptions& mc, double exact_tolerance) {
  detail::require(n >= 2, "n", "must be at least 2");
  detail::require(m >= 1 && m < n, "m", "must satisfy 1 <= m < n");
  validate_mc(mc);
  validate_scales(r_values);
  for (double c : x_over_r) detail::require(c > 0.0, "x_samples", "must be positive");

  struct Point {
    double r, distance, phi, a;
  };
  std::vector<Point> points;
  for (double r : r_values) {
    std::vector<double> cs = x_over_r;
    cs.push_back(0.1);
    cs.push_back(10.0 / std::sqrt(r));
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    for (double c : cs) {
      const double d = c * r;
      const double a = r / d;
      points.push_back({r, d, std::min(1.0, std::pow(a, m)), a});
    }
  }

  // Conditional on the chi-square mass g of the other n - m coordinates, the slab event is
  // chi2_m <= a^2 g / (1 - a^2), whose probability is a regularized incomplete gamma.
  std::normal_distribution<double> normal;
  auto draw = [&](std::mt19937_64& rng) {
    double g = 0.0;
    for (int i = m; i < n; ++i) {
      const double z = normal(rng);
      g += z * z;
    }
    return g;
  };
  auto eval = [&](std::size_t i, double g) {
    const double a = points[i].a;
    if (a >= 1.0) return 1.0;
    return lower_gamma_half(0.5 * m, 0.5 * a * a * g / (1.0 - a * a));
  };
  std::vector<Moments> moments;
  const long trials = run_adaptive(mc, points.size(), moments, draw, eval);

  BracketReport rep;
  rep.check.name = "slab_integral";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double mean = moments[i].mean(trials);
    const double se = points[i].a >= 1.0 ? 0.0 : moments[i].relative_se(trials);
    rep.samples.push_back({points[i].r, points[i].distance, mean / points[i].phi, se, trials});
    const double exact = slab_integral_exact(points[i].distance, points[i].r, m, n);
    if (!std::isnan(exact)) {
      rep.check.add("r=" + format_number(points[i].r) + ",|x|=" + format_number(points[i].distance) + ":exact",
                    std::abs(mean / exact - 1.0) - exact_tolerance,
                    "estimate=" + format_number(mean) + " exact=" + format_number(exact));
    }
  }
  bracket_checks(rep, mc.target_se);
  return rep;
}

CheckReport check_monotonicity(const Cloud& cloud, const std::vector<double>& theta_grid,
                               const std::vector<int>& m_list, const ScaleSchedule& sched, double eta,
                               const EstimatorOptions& opt) {
  detail::require(!m_list.empty(), "m_list", "must be non-empty");
  detail::require(eta >= 0.0, "eta", "must be nonnegative");
  std::vector<int> ms = m_list;
  std::sort(ms.begin(), ms.end());
  for (int m : ms) detail::require(m >= 1 && m <= cloud.ambient_dim(), "m_list", "entries must lie in 1..n");

  std::vector<DimensionProfile> profiles;
  for (int m : ms) profiles.push_back(profile_curve(cloud, m, theta_grid, sched, opt));

  CheckReport rep;
  rep.name = "monotonicity";
  for (const auto& p : profiles)
    rep.add("m=" + std::to_string(p.m) + ":theta", p.worst_decrease() - eta,
            "max_kkt_gap=" + format_number(p.max_kkt_gap));
  for (std::size_t i = 0; i + 1 < profiles.size(); ++i) {
    for (std::size_t k = 0; k < theta_grid.size(); ++k) {
      const double lo = profiles[i].estimates[k], hi = profiles[i + 1].estimates[k];
      rep.add("theta=" + format_number(theta_grid[k]) + ":m=" + std::to_string(profiles[i].m) + "<=" +
                  std::to_string(profiles[i + 1].m),
              lo - hi - eta, "estimates=" + format_number(lo) + "," + format_number(hi));
    }
  }
  return rep;
}

CheckReport check_truncated_lower_bound(const Cloud& cloud, double r, double theta, double s,
                                        const EquilibriumOptions& solver, int phases) {
  const int n = cloud.ambient_dim();
  detail::require(s >= 0.0 && s <= n, "s", "must lie in [0,n]");
  const EquilibriumResult eq = capacity(cloud, {r, theta, s, n, KernelVariant::Truncated}, solver);
  const double gamma = eq.energy;
  double mass = 0.0;
  for (Eigen::Index i = 0; i < eq.weights.size(); ++i)
    if (eq.weights(i) > eq.support_tolerance && eq.potentials(i) <= (1.0 + solver.tol) * gamma)
      mass += eq.weights(i);
  const double bound = mass * std::pow(r, s) / gamma;
  const double sum = CoverSum(cloud, r, theta, phases).value(s);
  const double c = dyadic_slack(n);

  CheckReport rep;
  rep.name = "truncated_lower_bound";
  rep.add(scale_label(r, theta) + ",s=" + format_number(s), (bound - c * sum) / (c * sum),
          "bound=" + format_number(bound) + " S=" + format_number(sum) + " mu(F)=" + format_number(mass) +
              " kkt_gap=" + format_number(eq.kkt_gap));
  return rep;
}

std::vector<NamedCloud> canonical_suite(SuiteGrade grade) {
  std::vector<NamedCloud> suite;
  suite.push_back({"single_point", single_point(1)});
  if (grade == SuiteGrade::Estimation) {
    suite.push_back({"interval", generate_uniform_grid(1, 4097)});
    suite.push_back({"cantor10", generate_ifs_attractor(IfsSystem::middle_third_cantor(), 10)});
    suite.push_back({"f1", generate_sequence_set(1.0, 1000)});
    const Cloud f = generate_sequence_set(1.0, 100);
    suite.push_back({"f1xf1", product(f, f)});
    return suite;
  }
  suite.push_back({"interval", generate_uniform_grid(1, 1025)});
  suite.push_back({"cantor8", generate_ifs_attractor(IfsSystem::middle_third_cantor(), 8)});
  suite.push_back({"f1", generate_sequence_set(1.0, 1000)});
  const Cloud f = generate_sequence_set(1.0, 40);
  suite.push_back({"f1xf1", product(f, f)});
  suite.push_back({"square", generate_uniform_grid(2, 33)});
  return suite;
}

std::vector<CheckReport> run_verification(const std::vector<NamedCloud>& suite, const SuiteOptions& opt) {
  detail::require(!opt.r_exponents.empty(), "r_exponents", "must be non-empty");
  for (int k : opt.r_exponents) detail::require(k >= 1 && k <= 60, "r_exponents", "must lie in 1..60");
  enum Family { Sum, Cap, Sandwich, Kernel, Slab, Mono, Trunc, Count };
  const char* names[Count] = {"sum_lipschitz",     "capacity_lipschitz", "sandwich", "kernel_comparison",
                              "slab_integral",     "monotonicity",       "truncated_lower_bound"};

  struct Job {
    Family family;
    std::string prefix;
    std::function<CheckReport()> run;
  };
  std::vector<Job> jobs;
  std::uint64_t seed = opt.seed;
  for (const auto& nc : suite) {
    const Cloud& cloud = nc.cloud;
    const int n = cloud.ambient_dim();
    for (double theta : opt.thetas) {
      for (int k : opt.r_exponents) {
        const double r = std::ldexp(1.0, -k);
        const std::string prefix = nc.name + "/" + scale_label(r, theta);
        const auto pairs = random_exponent_pairs(opt.pairs, n, seed++);
        jobs.push_back({Sum, prefix, [&cloud, r, theta, pairs] { return check_sum_lipschitz(cloud, r, theta, pairs); }});
        jobs.push_back({Cap, prefix, [&cloud, r, theta, n, pairs, &opt] {
                          return check_capacity_lipschitz(cloud, r, theta, n, pairs, opt.solver);
                        }});
        jobs.push_back({Trunc, nc.name, [&cloud, r, theta, n, &opt] {
                          return check_truncated_lower_bound(cloud, r, theta, 0.5 * n, opt.solver);
                        }});
      }
    }
    const int k_first = *std::min_element(opt.r_exponents.begin(), opt.r_exponents.end());
    const int k_last = *std::max_element(opt.r_exponents.begin(), opt.r_exponents.end());
    for (const auto& sc : opt.sandwich) {
      jobs.push_back({Sandwich, nc.name, [&cloud, sc, n, k_first, k_last, &opt] {
                        SandwichOptions so;
                        so.solver = opt.solver;
                        return check_sandwich(cloud, sc.theta, sc.s_fraction * n,
                                              ScaleSchedule::dyadic(k_first, k_last), so);
                      }});
    }
  }

  const std::vector<NamedCloud> estimation =
      opt.estimation_suite.empty() ? canonical_suite(SuiteGrade::Estimation) : opt.estimation_suite;
  for (const auto& nc : estimation) {
    std::vector<int> ms;
    for (int m = 1; m <= nc.cloud.ambient_dim(); ++m) ms.push_back(m);
    jobs.push_back({Mono, nc.name, [&cloud = nc.cloud, ms, &opt] {
                      EstimatorOptions eo;
                      eo.solver = opt.solver;
                      return check_monotonicity(cloud, opt.monotonicity_grid, ms, opt.monotonicity_schedule,
                                                opt.eta, eo);
                    }});
  }

  const std::vector<std::pair<int, int>> shapes = {{2, 1}, {3, 1}, {3, 2}};
  const std::vector<double> branches = {-0.5, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
  const std::vector<double> slab_x = {0.5, 1.0, 2.0, 5.0, 10.0};
  for (const auto& [n, m] : shapes) {
    const std::string shape = "n=" + std::to_string(n) + ",m=" + std::to_string(m);
    for (double theta : {0.3, 0.7}) {
      MonteCarloOptions mc = opt.mc;
      mc.seed = seed++;
      jobs.push_back({Kernel, shape + ",theta=" + format_number(theta), [=, &opt] {
                        return check_kernel_comparison(branches, opt.mc_scales, theta, 0.5 * m, m, n, mc).check;
                      }});
    }
    MonteCarloOptions mc = opt.mc;
    mc.seed = seed++;
    jobs.push_back({Slab, shape, [=, &opt] { return check_slab_integral(slab_x, opt.mc_scales, m, n, mc).check; }});
  }

  std::vector<CheckReport> results(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { results[i] = jobs[i].run(); });

  std::vector<CheckReport> out(Count);
  for (int f = 0; f < Count; ++f) out[f].name = names[f];
  for (std::size_t i = 0; i < jobs.size(); ++i) out[jobs[i].family].merge(results[i], jobs[i].prefix);
  return out;
}

}  // namespace intdim
