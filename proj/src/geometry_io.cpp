#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "intdim/geometry.hpp"
#include "intdim/log.hpp"

namespace intdim {

namespace {

std::mutex g_sink_mutex;
WarningSink g_sink;

std::int64_t checked_power(std::int64_t base, int exponent, std::int64_t budget) {
  std::int64_t total = 1;
  for (int i = 0; i < exponent; ++i) {
    if (total > budget / std::max<std::int64_t>(base, 1)) {
      throw BudgetError("point budget of " + std::to_string(budget) + " exceeded");
    }
    total *= base;
  }
  if (total > budget) throw BudgetError("point budget of " + std::to_string(budget) + " exceeded");
  return total;
}

}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  std::swap(g_sink, sink);
  return sink;
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  if (g_sink) {
    g_sink(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

void IfsSystem::validate() const {
  detail::require(ambient_dim >= 1, "ambient_dim", "must be at least 1");
  detail::require(!maps.empty(), "maps", "at least one map is required");
  for (const auto& map : maps) {
    detail::require(map.ratio > 0.0 && map.ratio < 1.0, "ratio", "must lie strictly in (0,1)");
    detail::require(map.translation.size() == ambient_dim, "translation",
                    "length must equal ambient_dim");
    if (map.rotation) {
      detail::require(map.rotation->rows() == ambient_dim && map.rotation->cols() == ambient_dim,
                      "rotation", "must be ambient_dim x ambient_dim");
      const Eigen::MatrixXd gram = map.rotation->transpose() * *map.rotation;
      detail::require(gram.isIdentity(1e-9), "rotation", "must be orthogonal");
    }
  }
}

IfsSystem IfsSystem::middle_third_cantor() {
  IfsSystem sys;
  sys.ambient_dim = 1;
  sys.maps.push_back({1.0 / 3.0, Eigen::VectorXd::Constant(1, 0.0), std::nullopt});
  sys.maps.push_back({1.0 / 3.0, Eigen::VectorXd::Constant(1, 2.0 / 3.0), std::nullopt});
  return sys;
}

Cloud generate_sequence_set(double p, std::int64_t count) {
  detail::require(p > 0.0, "p", "must be positive");
  detail::require(count >= 1, "count", "must be at least 1");
  detail::require(count + 1 <= kDefaultPointBudget, "count", "exceeds the point budget");
  Cloud::Matrix pts(count + 1, 1);
  pts(0, 0) = 0.0;
  for (std::int64_t k = 1; k <= count; ++k) pts(k, 0) = std::pow(static_cast<double>(k), -p);
  return Cloud(pts, Provenance{"sequence_set", {}}.with("p", p).with("count", std::to_string(count)));
}

Cloud product(const Cloud& a, const Cloud& b, std::int64_t budget) {
  const std::int64_t na = a.size();
  const std::int64_t nb = b.size();
  if (na > budget / nb) {
    throw BudgetError("product of " + std::to_string(na) + " and " + std::to_string(nb) +
                      " points exceeds the budget of " + std::to_string(budget));
  }
  const int da = a.ambient_dim();
  const int db = b.ambient_dim();
  Cloud::Matrix pts(na * nb, da + db);
  for (std::int64_t i = 0; i < na; ++i) {
    for (std::int64_t j = 0; j < nb; ++j) {
      pts.row(i * nb + j) << a.point(i), b.point(j);
    }
  }
  return Cloud(pts, Provenance{"product", {}}
                        .with("a", a.descriptor().describe())
                        .with("b", b.descriptor().describe()));
}

Cloud generate_ifs_attractor(const IfsSystem& sys, int depth, std::int64_t budget) {
  sys.validate();
  detail::require(depth >= 1, "depth", "must be at least 1");
  checked_power(static_cast<std::int64_t>(sys.maps.size()), depth, budget);

  Eigen::MatrixXd current = Eigen::MatrixXd::Zero(sys.ambient_dim, 1);
  for (int level = 0; level < depth; ++level) {
    Eigen::MatrixXd next(sys.ambient_dim, current.cols() * static_cast<Eigen::Index>(sys.maps.size()));
    Eigen::Index col = 0;
    for (const auto& map : sys.maps) {
      Eigen::MatrixXd image = map.rotation ? Eigen::MatrixXd(*map.rotation * current) : current;
      image *= map.ratio;
      image.colwise() += map.translation;
      next.middleCols(col, image.cols()) = image;
      col += image.cols();
    }
    current.swap(next);
  }

  Cloud::Matrix pts = current.transpose();
  Provenance prov{"ifs_attractor", {}};
  prov.with("maps", std::to_string(sys.maps.size())).with("depth", std::to_string(depth));
  for (std::size_t i = 0; i < sys.maps.size(); ++i) {
    prov.with("ratio" + std::to_string(i), sys.maps[i].ratio);
  }
  return Cloud(pts, std::move(prov));
}

Cloud generate_carpet(int base_a, int base_b, const std::vector<std::pair<int, int>>& digits,
                      int depth, std::int64_t budget) {
  detail::require(base_a >= 2, "base_a", "must be at least 2");
  detail::require(base_b > base_a, "base_b", "must exceed base_a");
  detail::require(!digits.empty(), "digits", "must be non-empty");
  detail::require(depth >= 1, "depth", "must be at least 1");
  for (const auto& [i, j] : digits) {
    detail::require(i >= 0 && i < base_a && j >= 0 && j < base_b, "digits",
                    "digit (" + std::to_string(i) + "," + std::to_string(j) + ") outside the grid");
  }
  const std::int64_t total = checked_power(static_cast<std::int64_t>(digits.size()), depth, budget);

  Cloud::Matrix pts(total, 2);
  for (std::int64_t word = 0; word < total; ++word) {
    double x = 0.0, y = 0.0, wa = 1.0, wb = 1.0;
    std::int64_t rest = word;
    for (int level = 0; level < depth; ++level) {
      const auto& [i, j] = digits[static_cast<std::size_t>(rest % static_cast<std::int64_t>(digits.size()))];
      rest /= static_cast<std::int64_t>(digits.size());
      wa /= base_a;
      wb /= base_b;
      x += i * wa;
      y += j * wb;
    }
    pts(word, 0) = x;
    pts(word, 1) = y;
  }
  return Cloud(pts, Provenance{"carpet", {}}
                        .with("a", std::to_string(base_a))
                        .with("b", std::to_string(base_b))
                        .with("digits", std::to_string(digits.size()))
                        .with("depth", std::to_string(depth)));
}

Cloud generate_uniform_grid(int dim, std::int64_t per_axis, std::int64_t budget) {
  detail::require(dim >= 1, "dim", "must be at least 1");
  detail::require(per_axis >= 1, "per_axis", "must be at least 1");
  const std::int64_t total = checked_power(per_axis, dim, budget);
  Cloud::Matrix pts(total, dim);
  const double step = per_axis > 1 ? 1.0 / static_cast<double>(per_axis - 1) : 0.0;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rest = idx;
    for (int c = dim - 1; c >= 0; --c) {
      pts(idx, c) = static_cast<double>(rest % per_axis) * step;
      rest /= per_axis;
    }
  }
  return Cloud(pts, Provenance{"uniform_grid", {}}
                        .with("dim", std::to_string(dim))
                        .with("per_axis", std::to_string(per_axis)));
}

Cloud single_point(int dim) {
  detail::require(dim >= 1, "dim", "must be at least 1");
  return Cloud(Cloud::Matrix::Zero(1, dim), Provenance{"single_point", {}});
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(std::string text, double& value) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  std::size_t start = 0;
  while (start < text.size() && std::isspace(static_cast<unsigned char>(text[start]))) ++start;
  text = text.substr(start);
  if (text.empty()) return false;
  char* end = nullptr;
  value = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size();
}

Cloud finish_load(const std::vector<std::vector<double>>& rows, const std::string& path) {
  if (rows.empty()) throw ParseError(path + ": no points");
  const std::size_t dim = rows.front().size();
  Cloud::Matrix pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < dim; ++c) pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  }
  Cloud cloud(pts, Provenance{"file", {}}.with("path", path));
  if (cloud.duplicates_removed() > 0) {
    warn(path + ": removed " + std::to_string(cloud.duplicates_removed()) + " duplicate point(s)");
  }
  return cloud;
}

Cloud load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_double(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw ParseError(path + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(rows.front().size()) + " columns, found " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return finish_load(rows, path);
}

Cloud load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_array()) throw ParseError(path + ": expected an array of points");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    std::vector<double> row;
    if (item.is_number()) {
      row.push_back(item.get<double>());
    } else if (item.is_array()) {
      for (const auto& v : item) {
        if (!v.is_number()) throw ParseError(path + ": point " + std::to_string(i) + " has a non-numeric entry");
        row.push_back(v.get<double>());
      }
    } else {
      throw ParseError(path + ": point " + std::to_string(i) + " is not an array");
    }
    if (row.empty()) throw ParseError(path + ": point " + std::to_string(i) + " is empty");
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path + ": point " + std::to_string(i) + " has inconsistent dimension");
    }
    rows.push_back(std::move(row));
  }
  return finish_load(rows, path);
}

}  // namespace

Cloud load_points(const std::string& path, PointFormat format) {
  return format == PointFormat::Json ? load_json(path) : load_csv(path);
}

Cloud load_points(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const bool json = dot != std::string::npos && path.substr(dot) == ".json";
  return load_points(path, json ? PointFormat::Json : PointFormat::Csv);
}

}  // namespace intdim
