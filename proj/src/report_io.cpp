#include "intdim/report_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "intdim/errors.hpp"
#include "intdim/format.hpp"

namespace intdim {

namespace {

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string profile_csv(const std::vector<DimensionProfile>& profiles) {
  std::string out = "theta,m,mode,estimate,residual\n";
  for (const auto& p : profiles) {
    for (std::size_t k = 0; k < p.theta_grid.size(); ++k) {
      out += format_fixed(p.theta_grid[k], 6) + "," + std::to_string(p.m) + "," + to_string(p.mode) + "," +
             format_fixed(p.estimates[k]) + "," + format_fixed(p.residuals[k]) + "\n";
    }
  }
  return out;
}

std::string diagnostics_csv(const std::vector<DimensionProfile>& profiles) {
  std::string out = "theta,s,r,quotient\n";
  for (const auto& p : profiles)
    for (const auto& d : p.diagnostics)
      out += format_fixed(d.theta, 6) + "," + format_fixed(d.s) + "," + format_number(d.r) + "," +
             format_fixed(d.quotient) + "\n";
  return out;
}

std::string projection_csv(const ProjectionReport& report) {
  std::string out = "frame_seed,theta,estimate,profile,violation_flag\n";
  const auto& grid = report.profile.theta_grid;
  for (std::size_t i = 0; i < report.frames.size(); ++i) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double est = report.estimates[i][k];
      const double prof = report.profile.estimates[k];
      out += std::to_string(report.frames[i].seed) + "," + format_fixed(grid[k], 6) + "," + format_fixed(est) +
             "," + format_fixed(prof) + "," + (est > prof + report.eta ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::string points_csv(const Cloud& cloud) {
  std::string out;
  const auto& pts = cloud.points();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index c = 0; c < pts.cols(); ++c) {
      if (c) out += ",";
      out += format_number(pts(i, c));
    }
    out += "\n";
  }
  return out;
}

std::string cells_csv(const CoverSumResult& result) {
  std::string out;
  if (!result.cells.empty()) {
    for (Eigen::Index c = 0; c < result.cells.front().corner.size(); ++c) out += "x" + std::to_string(c) + ",";
    out += "side,level\n";
  }
  for (const auto& cell : result.cells) {
    for (Eigen::Index c = 0; c < cell.corner.size(); ++c) out += format_number(cell.corner(c)) + ",";
    out += format_number(cell.side) + "," + std::to_string(cell.level) + "\n";
  }
  return out;
}

nlohmann::json to_json(const EquilibriumResult& eq) {
  return {{"weights", std::vector<double>(eq.weights.data(), eq.weights.data() + eq.weights.size())},
          {"energy", eq.energy},
          {"capacity", eq.capacity},
          {"potentials", std::vector<double>(eq.potentials.data(), eq.potentials.data() + eq.potentials.size())},
          {"kkt_gap", eq.kkt_gap},
          {"support_gap", eq.support_gap},
          {"iterations", eq.iterations},
          {"attempts", eq.attempts}};
}

nlohmann::json to_json(const SubspaceFrame& frame) {
  nlohmann::json basis = nlohmann::json::array();
  for (Eigen::Index i = 0; i < frame.basis.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(frame.basis.cols()));
    for (Eigen::Index c = 0; c < frame.basis.cols(); ++c) row[static_cast<std::size_t>(c)] = frame.basis(i, c);
    basis.push_back(row);
  }
  return {{"seed", frame.seed}, {"basis", basis}};
}

nlohmann::json frames_json(const ProjectionReport& report) {
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t i = 0; i < report.frames.size(); ++i) {
    auto f = to_json(report.frames[i]);
    f["exceptional"] = report.is_exceptional[i] != 0;
    frames.push_back(std::move(f));
  }
  return {{"m", report.m}, {"frames", frames}};
}

nlohmann::json to_json(const CheckReport& report) {
  nlohmann::json details = nlohmann::json::array();
  for (const auto& d : report.details)
    details.push_back({{"instance", d.instance}, {"margin", number_or_null(d.margin)}, {"note", d.note}});
  return {{"name", report.name},
          {"instances", report.instances},
          {"worst_margin", number_or_null(report.worst_margin)},
          {"pass", report.pass},
          {"details", details}};
}

nlohmann::json verification_json(const std::vector<CheckReport>& reports) {
  bool pass = true;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    checks.push_back(to_json(r));
  }
  return {{"pass", pass}, {"checks", checks}};
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace intdim
