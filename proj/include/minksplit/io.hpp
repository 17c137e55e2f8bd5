#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "minksplit/geometry.hpp"
#include "minksplit/linmaps.hpp"
#include "minksplit/reports.hpp"
#include "minksplit/splitting.hpp"

namespace minksplit::io {

// File helpers; both throw std::invalid_argument on unusable paths.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Body format: {"type":"polytope","vertices":[[...],...]},
// {"type":"ellipsoid","center":[...],"shape":[[...],...]}, or
// {"type":"product","factors":[...]}.
nlohmann::json body_to_json(const geometry::ConvexBody& body);
geometry::ConvexBody body_from_json(const nlohmann::json& j);

// Map formats: {"type":"linear_map","matrix":[[...],...]} and
// {"type":"product_map","left":[[...],...],"right":[[...],...]}.
nlohmann::json map_to_json(const linmaps::LinearMap& map);
nlohmann::json map_to_json(const linmaps::ProductMap& map);
linmaps::LinearMap linear_map_from_json(const nlohmann::json& j);
linmaps::ProductMap product_map_from_json(const nlohmann::json& j);

// Sampled maps as CSV rows "id,adjacency,x0,x1,...", where adjacency is a
// semicolon-joined list of neighbor ids (possibly empty). A header row with
// first field "id" and lines starting with '#' are skipped.
splitting::SampledMap samples_from_csv(const std::string& text);
std::string samples_to_csv(const splitting::SampledMap& f);

// One point per CSV line, comma-separated coordinates. Header rows whose
// first field is not a number are skipped.
std::vector<Point> points_from_csv(const std::string& text);

// Report schemas: probe rows are "y0,...,dist" (dist = nan for infeasible
// targets); continuity rows are "edge,jump".
std::string probe_to_csv(const ProbeReport& report);
std::string continuity_to_csv(const ContinuityReport& report);

// Selection paths and split lists, one row per sample.
std::string selections_to_csv(const std::vector<Point>& selections);
std::string splits_to_csv(const std::vector<std::string>& ids,
                          const std::vector<splitting::SplitResult>& splits);

// Minimal SVG document with a single polyline through (xs[i], ys[i]).
std::string svg_polyline(const std::vector<double>& xs,
                         const std::vector<double>& ys);

}  // namespace minksplit::io
