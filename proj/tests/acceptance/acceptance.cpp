// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "intdim/covers.hpp"
#include "intdim/equilibrium.hpp"
#include "intdim/geometry.hpp"
#include "intdim/log.hpp"
#include "intdim/profiles.hpp"
#include "intdim/projections.hpp"
#include "intdim/report_io.hpp"
#include "intdim/verify.hpp"

using namespace intdim;

namespace {

// tolerances
constexpr double kBoxTolerance = 0.05;          // 1
constexpr double kBoxSeconds = 30.0;            // 1
constexpr double kProductTolerance = 0.07;      // 2
constexpr double kProductSeconds = 120.0;       // 2
constexpr double kProjectionTolerance = 0.07;   // 3
constexpr double kAxisTolerance = 0.05;         // 3
constexpr double kProjectionSeconds = 600.0;    // 3
constexpr int kProjectionTrials = 20;           // 3
constexpr double kCrossTolerance = 0.05;        // 4
constexpr double kCrossSeconds = 900.0;         // 4
constexpr double kSureSlack = 0.07;             // 5
constexpr double kSuiteSeconds = 600.0;         // 6, 7
constexpr double kMonteCarloSeconds = 300.0;    // 8
constexpr double kArcsineKs = 0.02;             // 8
constexpr double kMonteCarloSe = 0.01;          // 8
constexpr double kKktGap = 1e-6;                // 9
constexpr double kTwoPointTolerance = 1e-10;    // 9
constexpr double kMonotoneEta = 0.02;           // 10
constexpr double kSquareFloor = 1.95;           // 11
constexpr double kSquareSeconds = 120.0;        // 11

struct Line {
  int id;
  bool pass;
  std::string detail;
};

std::vector<Line> results;
double worst_kkt = 0.0;  // over every capacity profile computed here

void report(int id, bool pass, const std::string& detail) {
  results.push_back({id, pass, detail});
  std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Cloud f1_square(int count) {
  const Cloud f = generate_sequence_set(1.0, count);
  return product(f, f);
}

std::string cover_csv_f1() {
  const Cloud c = generate_sequence_set(1.0, 10000);
  return profile_csv({cover_curve(c, {1.0}, bind_schedule(ScaleSchedule{}, c))});
}

std::string capacity_csv_cantor() {
  const Cloud c = generate_ifs_attractor(IfsSystem::middle_third_cantor(), 10);
  return profile_csv({profile_curve(c, 1, {0.3, 0.7}, bind_schedule(ScaleSchedule{}, c))});
}

void criterion1() {
  bool pass = true;
  std::string detail;
  for (double p : {0.5, 1.0, 2.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const Cloud c = generate_sequence_set(p, 10000);
    const double est = cover_fixed_point(c, 1.0, bind_schedule(ScaleSchedule{}, c)).estimate;
    const double t = seconds_since(t0);
    const double target = 1.0 / (1.0 + p);
    pass = pass && std::abs(est - target) <= kBoxTolerance && t < kBoxSeconds;
    detail += fmt("p=%g est=%.4f target=%.4f (%.1fs)  ", p, est, target, t);
  }
  report(1, pass, detail);
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const Cloud c = f1_square(100);
  const double est = cover_fixed_point(c, 1.0, bind_schedule(ScaleSchedule{}, c)).estimate;
  const double t = seconds_since(t0);
  report(2, std::abs(est - 1.0) <= kProductTolerance && t < kProductSeconds,
         fmt("F1xF1 101^2 est=%.4f target=1 tol=%.2f (%.1fs)", est, kProductTolerance, t));
}

std::optional<ProjectionReport> projection_run;

void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const Cloud c = f1_square(100);
  ProjectionOptions opt;
  opt.trials = kProjectionTrials;
  opt.seed = 1;
  opt.theta_grid = {1.0};
  opt.eta = kSureSlack;
  opt.schedule = bind_schedule(ScaleSchedule{}, c);
  opt.exceptional = {axis_frame(2, {0}), axis_frame(2, {1})};
  projection_run = projection_experiment(c, 1, opt);
  worst_kkt = std::max(worst_kkt, projection_run->profile.max_kkt_gap);
  const double t = seconds_since(t0);
  const double median = projection_run->median[0];
  const double target = 1.0 - 0.25;
  bool pass = std::abs(median - target) <= kProjectionTolerance && t < kProjectionSeconds;
  std::string axes;
  for (std::size_t i = 0; i < projection_run->frames.size(); ++i) {
    if (!projection_run->is_exceptional[i]) continue;
    const double est = projection_run->estimates[i][0];
    pass = pass && std::abs(est - 0.5) <= kAxisTolerance;
    axes += fmt(" %.4f", est);
  }
  report(3, pass,
         fmt("median of %d directions=%.4f target=0.75 iqr=%.4f; axes%s target=0.5 (%.1fs)", kProjectionTrials,
             median, projection_run->iqr[0], axes.c_str(), t));
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> grid = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<NamedCloud> sets = {{"interval4096", generate_uniform_grid(1, 4097)},
                                  {"cantor10", generate_ifs_attractor(IfsSystem::middle_third_cantor(), 10)},
                                  {"f1_1e4", generate_sequence_set(1.0, 10000)}};
  bool pass = true;
  std::string detail;
  for (const auto& [name, cloud] : sets) {
    const auto sched = bind_schedule(ScaleSchedule{}, cloud);
    const auto cov = cover_curve(cloud, grid, sched);
    const auto cap = profile_curve(cloud, 1, grid, sched);
    worst_kkt = std::max(worst_kkt, cap.max_kkt_gap);
    double worst = 0.0;
    double at = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double d = std::abs(cap.estimates[k] - cov.estimates[k]);
      if (d > worst) {
        worst = d;
        at = grid[k];
      }
    }
    pass = pass && worst <= kCrossTolerance;
    detail += fmt("%s max|cap-cover|=%.4f at theta=%.1f  ", name.c_str(), worst, at);
  }
  const double t = seconds_since(t0);
  report(4, pass && t < kCrossSeconds, detail + fmt("(%.1fs)", t));
}

void criterion5() {
  if (!projection_run) criterion3();
  report(5, projection_run->exceed_count == 0,
         fmt("%d violations of estimate <= profile + %.2f over %zu frames; profile=%.4f", projection_run->exceed_count,
             kSureSlack, projection_run->frames.size(), projection_run->profile.estimates[0]));
}

std::vector<CheckReport> suite_reports;
double suite_seconds = 0.0;

const CheckReport& suite_check(const std::string& name) {
  if (suite_reports.empty()) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteOptions opt;
    opt.eta = kMonotoneEta;
    opt.mc.target_se = kMonteCarloSe;
    suite_reports = run_verification(canonical_suite(SuiteGrade::Inequality), opt);
    suite_seconds = seconds_since(t0);
  }
  for (const auto& r : suite_reports)
    if (r.name == name) return r;
  throw Error("no check named " + name);
}

std::string summary(const CheckReport& r) {
  std::string out = fmt("%s: %d instances worst_margin=%.3g", r.name.c_str(), r.instances, r.worst_margin);
  int failures = 0;
  for (const auto& d : r.details)
    if (d.margin > 0.0 && failures++ < 3) out += " [" + d.instance + " " + fmt("%.3g", d.margin) + "]";
  if (failures > 3) out += fmt(" [+%d more]", failures - 3);
  return out;
}

void criterion6() {
  const auto& sum = suite_check("sum_lipschitz");
  const auto& cap = suite_check("capacity_lipschitz");
  report(6, sum.pass && cap.pass && suite_seconds < kSuiteSeconds,
         summary(sum) + "; " + summary(cap) + fmt(" (suite %.1fs)", suite_seconds));
  const auto& trunc = suite_check("truncated_lower_bound");
  std::printf("             info  %s\n", summary(trunc).c_str());
}

void criterion7() {
  const auto& r = suite_check("sandwich");
  report(7, r.pass, summary(r));
}

void criterion8() {
  const auto& kernel = suite_check("kernel_comparison");
  const auto& slab = suite_check("slab_integral");
  // arcsine law of |pi_V e_1| for n = 2, m = 1
  const auto t0 = std::chrono::steady_clock::now();
  const int count = 10000;
  std::vector<double> t;
  for (int seed = 0; seed < count; ++seed) t.push_back(std::abs(sample_subspace(2, 1, seed).basis(0, 0)));
  std::sort(t.begin(), t.end());
  double ks = 0.0;
  for (int i = 0; i < count; ++i) {
    const double cdf = 1.0 - 2.0 / std::numbers::pi * std::acos(t[i]);
    ks = std::max({ks, std::abs(cdf - double(i) / count), std::abs(cdf - double(i + 1) / count)});
  }
  const double t_ks = seconds_since(t0);
  report(8, kernel.pass && slab.pass && ks < kArcsineKs && suite_seconds < kMonteCarloSeconds + kSuiteSeconds,
         summary(kernel) + "; " + summary(slab) + fmt("; arcsine KS=%.4f (%.1fs)", ks, t_ks));
}

void criterion9() {
  double worst_two = 0.0;
  for (double phi = 0.0; phi <= 1.0; phi += 1.0 / 64) {
    Eigen::MatrixXd g(2, 2);
    g << 1.0, phi, phi, 1.0;
    worst_two = std::max(worst_two, std::abs(minimize_energy(g).capacity - 2.0 / (1.0 + phi)));
  }
  report(9, worst_kkt <= kKktGap && worst_two <= kTwoPointTolerance,
         fmt("max kkt gap over capacity profiles=%.3g; two-point max error=%.3g", worst_kkt, worst_two));
}

void criterion10() {
  const auto& r = suite_check("monotonicity");
  report(10, r.pass && suite_seconds < kSuiteSeconds, summary(r) + fmt(" eta=%.2f", kMonotoneEta));
}

void criterion11() {
  const auto t0 = std::chrono::steady_clock::now();
  const Cloud c = generate_uniform_grid(2, 1000);
  const auto grid = default_theta_grid();
  const auto prof = cover_curve(c, grid, bind_schedule(ScaleSchedule{}, c));
  const double t = seconds_since(t0);
  bool pass = t < kSquareSeconds;
  std::string detail = "square grid 1000^2:";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    pass = pass && prof.estimates[k] >= kSquareFloor;
    detail += fmt(" %.1f:%.3f", grid[k], prof.estimates[k]);
  }
  report(11, pass, detail + fmt(" floor=%.2f (%.1fs)", kSquareFloor, t));
}

void criterion12() {
  const std::string a1 = cover_csv_f1(), a2 = cover_csv_f1();
  const std::string b1 = capacity_csv_cantor(), b2 = capacity_csv_cantor();
  const Cloud c = f1_square(40);
  ProjectionOptions opt;
  opt.trials = 3;
  opt.seed = 5;
  opt.schedule = ScaleSchedule::dyadic(2, 9);
  const std::string p1 = projection_csv(projection_experiment(c, 1, opt));
  const std::string p2 = projection_csv(projection_experiment(c, 1, opt));
  report(12, a1 == a2 && b1 == b2 && p1 == p2,
         fmt("cover csv %s, capacity csv %s, projection csv %s", a1 == a2 ? "identical" : "differs",
             b1 == b2 ? "identical" : "differs", p1 == p2 ? "identical" : "differs"));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  if (wanted.empty())
    for (int i = 1; i <= 12; ++i) wanted.insert(i);
  set_warning_sink([](const std::string&) {});

  const std::vector<std::function<void()>> criteria = {criterion1, criterion2, criterion3,  criterion4,
                                                       criterion5, criterion6, criterion7,  criterion8,
                                                       criterion9, criterion10, criterion11, criterion12};
  const auto t0 = std::chrono::steady_clock::now();
  for (int id : wanted) {
    if (id < 1 || id > 12) continue;
    try {
      criteria[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
      report(id, false, std::string("error: ") + e.what());
    }
  }
  int failed = 0;
  for (const auto& l : results) failed += l.pass ? 0 : 1;
  std::printf("acceptance: %zu criteria, %d failed (%.1fs)\n", results.size(), failed, seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
