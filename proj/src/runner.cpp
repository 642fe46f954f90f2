#include "intdim/runner.hpp"

#include <chrono>
#include <filesystem>
#include <optional>

#include "intdim/errors.hpp"
#include "intdim/format.hpp"
#include "intdim/parallel.hpp"
#include "intdim/projections.hpp"
#include "intdim/report_io.hpp"
#include "intdim/svg_plot.hpp"
#include "intdim/verify.hpp"

namespace intdim {

namespace {

using nlohmann::json;

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  std::vector<std::string> written;

  std::string path(const std::string& name) const { return (std::filesystem::path(cfg.output) / name).string(); }
  void save(const std::string& name, const std::string& text) {
    write_text(path(name), text);
    written.push_back(name);
  }
};

PlotSeries curve(const DimensionProfile& p, const std::string& source) {
  return {source + " m=" + std::to_string(p.m) + " " + to_string(p.mode), p.theta_grid, p.estimates, false};
}

void save_profiles(Context& ctx, const std::string& source, const std::vector<DimensionProfile>& profiles) {
  ctx.save(source + "_profile.csv", profile_csv(profiles));
  ctx.save(source + "_diagnostics.csv", diagnostics_csv(profiles));
  for (const auto& p : profiles)
    for (std::size_t k = 0; k < p.theta_grid.size(); ++k)
      ctx.out << source << " m=" << p.m << " theta=" << format_fixed(p.theta_grid[k], 3)
              << " estimate=" << format_fixed(p.estimates[k], 6) << (p.clamped[k] ? " (clamped)" : "") << "\n";
}

int run_generate(Context& ctx, const Cloud& cloud) {
  ctx.save("points.csv", points_csv(cloud));
  ctx.out << "generated " << cloud.size() << " points in R^" << cloud.ambient_dim() << ": "
          << cloud.descriptor().describe() << "\n";
  return kExitOk;
}

int run_estimate(Context& ctx, const Cloud& cloud, const std::vector<int>& ms) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<PlotSeries> plot;
  std::optional<DimensionProfile> cover;
  if (cfg.source != EstimateSource::Capacity) {
    cover = cover_curve(cloud, cfg.theta_grid, cfg.schedule, cfg.estimator);
    save_profiles(ctx, "cover", {*cover});
    plot.push_back(curve(*cover, "cover"));
  }
  std::vector<DimensionProfile> caps;
  if (cfg.source != EstimateSource::Cover) {
    for (int m : ms) caps.push_back(profile_curve(cloud, m, cfg.theta_grid, cfg.schedule, cfg.estimator));
    save_profiles(ctx, "capacity", caps);
    for (const auto& p : caps) plot.push_back(curve(p, "capacity"));
  }
  if (cfg.dump) {
    const ScaleSchedule bound = bind_schedule(cfg.schedule, cloud);
    const double r = bound.r_values.back();
    for (std::size_t k = 0; k < cfg.theta_grid.size(); ++k) {
      const double theta = cfg.theta_grid[k];
      const std::string tag = "theta_" + format_fixed(theta, 3);
      if (cover) {
        const CoverSumResult res = restricted_cover_sum(cloud, r, theta, cover->estimates[k], cfg.estimator.cover_phases);
        ctx.save("cells_" + tag + ".csv", cells_csv(res));
      }
      for (const auto& p : caps) {
        const KernelSpec spec{r, theta, std::min(p.estimates[k], static_cast<double>(p.m)), p.m, KernelVariant::Full};
        const EquilibriumResult eq = capacity(cloud, spec, cfg.estimator.solver);
        ctx.save("equilibrium_" + tag + "_m" + std::to_string(p.m) + ".json", to_json(eq).dump(1) + "\n");
      }
    }
  }
  if (cfg.plot) ctx.save("plot.svg", render_svg(plot, cloud.descriptor().describe()));
  return kExitOk;
}

int run_project(Context& ctx, const Cloud& cloud, const std::vector<int>& ms) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<PlotSeries> plot;
  std::vector<DimensionProfile> profiles;
  json summary = json::array();
  for (int m : ms) {
    ProjectionOptions po;
    po.trials = cfg.trials;
    po.seed = cfg.seed;
    po.theta_grid = cfg.theta_grid;
    po.eta = cfg.eta;
    po.schedule = cfg.schedule;
    po.estimator = cfg.estimator;
    const ProjectionReport rep = projection_experiment(cloud, m, po);
    const std::string tag = "_m" + std::to_string(m);
    ctx.save("projection" + tag + ".csv", projection_csv(rep));
    ctx.save("frames" + tag + ".json", frames_json(rep).dump(1) + "\n");
    profiles.push_back(rep.profile);
    plot.push_back(curve(rep.profile, "capacity"));
    PlotSeries scatter{"projections m=" + std::to_string(m), {}, {}, true};
    for (const auto& row : rep.estimates) {
      for (std::size_t k = 0; k < row.size(); ++k) {
        scatter.x.push_back(cfg.theta_grid[k]);
        scatter.y.push_back(row[k]);
      }
    }
    plot.push_back(std::move(scatter));
    summary.push_back({{"m", m},
                       {"theta", cfg.theta_grid},
                       {"median", rep.median},
                       {"iqr", rep.iqr},
                       {"profile", rep.profile.estimates},
                       {"exceed_count", rep.exceed_count},
                       {"eta", rep.eta}});
    for (std::size_t k = 0; k < cfg.theta_grid.size(); ++k)
      ctx.out << "m=" << m << " theta=" << format_fixed(cfg.theta_grid[k], 3)
              << " median=" << format_fixed(rep.median[k], 6) << " iqr=" << format_fixed(rep.iqr[k], 6)
              << " profile=" << format_fixed(rep.profile.estimates[k], 6) << "\n";
    ctx.out << "m=" << m << " exceedances=" << rep.exceed_count << "\n";
  }
  ctx.save("capacity_profile.csv", profile_csv(profiles));
  ctx.save("projection_summary.json", summary.dump(1) + "\n");
  if (cfg.plot) ctx.save("plot.svg", render_svg(plot, cloud.descriptor().describe()));
  return kExitOk;
}

int run_verify(Context& ctx, const std::optional<Cloud>& cloud) {
  const RunConfig& cfg = ctx.cfg;
  SuiteOptions so;
  so.r_exponents = cfg.r_exponents;
  so.thetas = cfg.verify_thetas;
  so.pairs = cfg.pairs;
  so.seed = cfg.seed;
  so.mc.trials = cfg.mc_trials;
  so.mc.max_trials = std::max(so.mc.max_trials, cfg.mc_trials);
  so.mc.target_se = cfg.target_se;
  so.solver = cfg.estimator.solver;
  so.monotonicity_schedule = cfg.schedule;
  std::vector<NamedCloud> suite;
  if (cloud) {
    suite.push_back({"set", *cloud});
    so.estimation_suite = suite;
  } else {
    suite = canonical_suite(SuiteGrade::Inequality);
  }
  const auto reports = run_verification(suite, so);
  const json bundle = verification_json(reports);
  ctx.save("verify.json", bundle.dump(1) + "\n");
  for (const auto& r : reports)
    ctx.out << (r.pass ? "PASS " : "FAIL ") << r.name << " instances=" << r.instances
            << " worst_margin=" << format_number(r.worst_margin) << "\n";
  return bundle["pass"].get<bool>() ? kExitOk : kExitCompute;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  // validation: build the set and check m against its dimension
  std::optional<Cloud> cloud;
  std::vector<int> ms = cfg.m_list;
  try {
    if (!cfg.set.is_null()) cloud = build_set(cfg.set);
    if (cloud) {
      const int n = cloud->ambient_dim();
      if (ms.empty()) {
        if (cfg.command == Command::Project) ms = {1};
        else if (cfg.command == Command::Estimate) ms = {n};
        else for (int m = 1; m <= n; ++m) ms.push_back(m);
      }
      for (int m : ms) {
        detail::require(m <= n, "m", "must not exceed the ambient dimension " + std::to_string(n));
        detail::require(cfg.command != Command::Project || m < n, "m", "projections need m < n");
      }
      if (cfg.command == Command::Project) detail::require(n >= 2, "set", "projections need ambient dimension >= 2");
      // verify needs scales above the floor for its monotonicity profiles
      if (cfg.command != Command::Generate) bind_schedule(cfg.schedule, *cloud);
    }
    if (cfg.workers > 0) set_worker_count(cfg.workers);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  Context ctx{cfg, out, {}};
  const auto start = std::chrono::steady_clock::now();
  int code = kExitCompute;
  std::string error;
  try {
    switch (cfg.command) {
      case Command::Generate: code = run_generate(ctx, *cloud); break;
      case Command::Estimate:
      case Command::Profile: code = run_estimate(ctx, *cloud, ms); break;
      case Command::Project: code = run_project(ctx, *cloud, ms); break;
      case Command::Verify: code = run_verify(ctx, cloud); break;
    }
  } catch (const std::exception& e) {
    error = e.what();
    err << "error: " << error << "\n";
    code = kExitCompute;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest = {{"tool", "intdim"},
                   {"version", kToolVersion},
                   {"command", to_string(cfg.command)},
                   {"config_hash", cfg.hash()},
                   {"config", cfg.to_json()},
                   {"seeds", {{"seed", cfg.seed}}},
                   {"workers", worker_count()},
                   {"wall_time_s", wall},
                   {"exit_code", code},
                   {"status", code == kExitOk ? "ok" : "failed"},
                   {"outputs", ctx.written}};
  if (!error.empty()) manifest["error"] = error;
  try {
    write_text(ctx.path("manifest.json"), manifest.dump(1) + "\n");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return code;
}

}  // namespace intdim
