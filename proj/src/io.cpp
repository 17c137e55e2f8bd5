#include "minksplit/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace minksplit::io {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& s) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size())
      throw std::invalid_argument("csv: bad number '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("csv: bad number '" + s + "'");
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("csv: number out of range '" + s + "'");
  }
}

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  size_t pos = 0;
  try {
    std::stod(s, &pos);
  } catch (...) {
    return false;
  }
  return pos == s.size();
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_rows_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i)));
  return rows;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(std::string(what) +
                                ": expected a nonempty array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw std::invalid_argument(std::string(what) + ": expected a number");
    v(i) = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_rows_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(std::string(what) +
                                ": expected a nonempty array of rows");
  const Eigen::VectorXd first = vector_from_json(j[0], what);
  Eigen::MatrixXd m(j.size(), first.size());
  m.row(0) = first;
  for (size_t i = 1; i < j.size(); ++i) {
    const Eigen::VectorXd row = vector_from_json(j[i], what);
    if (row.size() != m.cols())
      throw std::invalid_argument(std::string(what) + ": ragged rows");
    m.row(i) = row;
  }
  return m;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
  if (!out) throw std::invalid_argument("write failed: " + path);
}

nlohmann::json body_to_json(const geometry::ConvexBody& body) {
  json j;
  if (body.is_polytope()) {
    j["type"] = "polytope";
    // one vertex per row
    j["vertices"] = matrix_rows_to_json(body.polytope().vertices().transpose());
  } else if (body.is_ellipsoid()) {
    j["type"] = "ellipsoid";
    j["center"] = vector_to_json(body.ellipsoid().center());
    j["shape"] = matrix_rows_to_json(body.ellipsoid().shape());
  } else {
    j["type"] = "product";
    json factors = json::array();
    for (const auto& f : body.factors()) factors.push_back(body_to_json(f));
    j["factors"] = factors;
  }
  return j;
}

geometry::ConvexBody body_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw std::invalid_argument("body: missing \"type\"");
  const std::string type = j["type"].get<std::string>();
  if (type == "polytope") {
    if (!j.contains("vertices"))
      throw std::invalid_argument("polytope: missing \"vertices\"");
    const Eigen::MatrixXd rows =
        matrix_rows_from_json(j["vertices"], "polytope vertices");
    return geometry::ConvexBody(geometry::Polytope(rows.transpose()));
  }
  if (type == "ellipsoid") {
    if (!j.contains("center") || !j.contains("shape"))
      throw std::invalid_argument("ellipsoid: missing \"center\" or \"shape\"");
    return geometry::ConvexBody(geometry::Ellipsoid(
        vector_from_json(j["center"], "ellipsoid center"),
        matrix_rows_from_json(j["shape"], "ellipsoid shape")));
  }
  if (type == "product") {
    if (!j.contains("factors") || !j["factors"].is_array() ||
        j["factors"].empty())
      throw std::invalid_argument("product: missing \"factors\"");
    std::vector<geometry::ConvexBody> factors;
    for (const auto& f : j["factors"]) factors.push_back(body_from_json(f));
    return geometry::ConvexBody::product(std::move(factors));
  }
  throw std::invalid_argument("body: unknown type '" + type + "'");
}

nlohmann::json map_to_json(const linmaps::LinearMap& map) {
  json j;
  j["type"] = "linear_map";
  j["matrix"] = matrix_rows_to_json(map.matrix());
  return j;
}

nlohmann::json map_to_json(const linmaps::ProductMap& map) {
  json j;
  j["type"] = "product_map";
  j["left"] = matrix_rows_to_json(map.left());
  j["right"] = matrix_rows_to_json(map.right());
  return j;
}

linmaps::LinearMap linear_map_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || j["type"] != "linear_map")
    throw std::invalid_argument("map: expected type \"linear_map\"");
  if (!j.contains("matrix"))
    throw std::invalid_argument("linear_map: missing \"matrix\"");
  return linmaps::LinearMap(matrix_rows_from_json(j["matrix"], "linear_map"));
}

linmaps::ProductMap product_map_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || j["type"] != "product_map")
    throw std::invalid_argument("map: expected type \"product_map\"");
  if (!j.contains("left") || !j.contains("right"))
    throw std::invalid_argument("product_map: missing \"left\" or \"right\"");
  return linmaps::ProductMap(
      matrix_rows_from_json(j["left"], "product_map left"),
      matrix_rows_from_json(j["right"], "product_map right"));
}

splitting::SampledMap samples_from_csv(const std::string& text) {
  splitting::SampledMap f;
  std::vector<std::string> adjacency_raw;
  std::istringstream in(text);
  std::string line;
  int coords = -1;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line, ',');
    if (fields[0] == "id") continue;  // header
    if (fields.size() < 3)
      throw std::invalid_argument(
          "samples: each row needs id, adjacency, and coordinates");
    if (coords < 0) coords = static_cast<int>(fields.size()) - 2;
    if (static_cast<int>(fields.size()) - 2 != coords)
      throw std::invalid_argument("samples: inconsistent coordinate count");
    f.sample_ids.push_back(fields[0]);
    adjacency_raw.push_back(fields[1]);
    Point v(coords);
    for (int i = 0; i < coords; ++i) v(i) = parse_number(fields[2 + i]);
    f.values.push_back(std::move(v));
  }
  if (f.sample_ids.empty())
    throw std::invalid_argument("samples: no rows found");

  std::map<std::string, int> index;
  for (size_t i = 0; i < f.sample_ids.size(); ++i) {
    if (!index.emplace(f.sample_ids[i], static_cast<int>(i)).second)
      throw std::invalid_argument("samples: duplicate id '" +
                                  f.sample_ids[i] + "'");
  }
  std::set<std::pair<int, int>> edges;
  for (size_t i = 0; i < adjacency_raw.size(); ++i) {
    if (adjacency_raw[i].empty()) continue;
    for (const auto& nb : split_fields(adjacency_raw[i], ';')) {
      if (nb.empty()) continue;
      auto it = index.find(nb);
      if (it == index.end())
        throw std::invalid_argument("samples: unknown neighbor id '" + nb +
                                    "'");
      const int a = static_cast<int>(i), b = it->second;
      if (a == b) continue;
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  f.adjacency.assign(edges.begin(), edges.end());
  return f;
}

std::string samples_to_csv(const splitting::SampledMap& f) {
  std::vector<std::vector<std::string>> neighbors(f.sample_ids.size());
  for (const auto& [i, j] : f.adjacency) {
    neighbors[i].push_back(f.sample_ids[j]);
    neighbors[j].push_back(f.sample_ids[i]);
  }
  std::ostringstream out;
  out << "id,adjacency";
  const int coords = f.values.empty() ? 0 : static_cast<int>(f.values[0].size());
  for (int i = 0; i < coords; ++i) out << ",x" << i;
  out << "\n";
  for (size_t k = 0; k < f.sample_ids.size(); ++k) {
    out << f.sample_ids[k] << ",";
    for (size_t j = 0; j < neighbors[k].size(); ++j) {
      if (j) out << ";";
      out << neighbors[k][j];
    }
    for (int i = 0; i < f.values[k].size(); ++i)
      out << "," << fmt(f.values[k](i));
    out << "\n";
  }
  return out.str();
}

std::vector<Point> points_from_csv(const std::string& text) {
  std::vector<Point> pts;
  std::istringstream in(text);
  std::string line;
  int coords = -1;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line, ',');
    if (!looks_numeric(fields[0])) continue;  // header
    if (coords < 0) coords = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != coords)
      throw std::invalid_argument("points: inconsistent coordinate count");
    Point v(coords);
    for (int i = 0; i < coords; ++i) v(i) = parse_number(fields[i]);
    pts.push_back(std::move(v));
  }
  if (pts.empty()) throw std::invalid_argument("points: no rows found");
  return pts;
}

std::string probe_to_csv(const ProbeReport& report) {
  std::ostringstream out;
  const int coords =
      report.targets.empty() ? 0 : static_cast<int>(report.targets[0].y.size());
  for (int i = 0; i < coords; ++i) out << "y" << i << ",";
  out << "dist\n";
  for (const auto& t : report.targets) {
    for (int i = 0; i < t.y.size(); ++i) out << fmt(t.y(i)) << ",";
    out << (t.feasible ? fmt(t.dist) : "nan") << "\n";
  }
  return out.str();
}

std::string continuity_to_csv(const ContinuityReport& report) {
  std::ostringstream out;
  out << "edge,jump\n";
  for (size_t k = 0; k < report.jumps.size(); ++k)
    out << k << "," << fmt(report.jumps[k]) << "\n";
  return out.str();
}

std::string selections_to_csv(const std::vector<Point>& selections) {
  std::ostringstream out;
  const int coords =
      selections.empty() ? 0 : static_cast<int>(selections[0].size());
  out << "sample";
  for (int i = 0; i < coords; ++i) out << ",x" << i;
  out << "\n";
  for (size_t k = 0; k < selections.size(); ++k) {
    out << k;
    for (int i = 0; i < selections[k].size(); ++i)
      out << "," << fmt(selections[k](i));
    out << "\n";
  }
  return out.str();
}

std::string splits_to_csv(const std::vector<std::string>& ids,
                          const std::vector<splitting::SplitResult>& splits) {
  std::ostringstream out;
  const int da = splits.empty() ? 0 : static_cast<int>(splits[0].a.size());
  const int db = splits.empty() ? 0 : static_cast<int>(splits[0].b.size());
  out << "id";
  for (int i = 0; i < da; ++i) out << ",a" << i;
  for (int i = 0; i < db; ++i) out << ",b" << i;
  out << ",residual,body_violation\n";
  for (size_t k = 0; k < splits.size(); ++k) {
    out << (k < ids.size() ? ids[k] : std::to_string(k));
    for (int i = 0; i < splits[k].a.size(); ++i)
      out << "," << fmt(splits[k].a(i));
    for (int i = 0; i < splits[k].b.size(); ++i)
      out << "," << fmt(splits[k].b(i));
    out << "," << fmt(splits[k].residual) << ","
        << fmt(splits[k].body_violation) << "\n";
  }
  return out.str();
}

std::string svg_polyline(const std::vector<double>& xs,
                         const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("svg: need matching nonempty coordinate lists");
  double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
  for (size_t i = 0; i < xs.size(); ++i) {
    xmin = std::min(xmin, xs[i]);
    xmax = std::max(xmax, xs[i]);
    ymin = std::min(ymin, ys[i]);
    ymax = std::max(ymax, ys[i]);
  }
  const double w = 600.0, h = 400.0, margin = 20.0;
  const double sx = (xmax > xmin) ? (w - 2 * margin) / (xmax - xmin) : 1.0;
  const double sy = (ymax > ymin) ? (h - 2 * margin) / (ymax - ymin) : 1.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n  <polyline fill=\"none\" "
         "stroke=\"black\" stroke-width=\"1\" points=\"";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out << " ";
    // y axis points down in svg
    out << fmt(margin + (xs[i] - xmin) * sx) << ","
        << fmt(h - margin - (ys[i] - ymin) * sy);
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

}  // namespace minksplit::io
