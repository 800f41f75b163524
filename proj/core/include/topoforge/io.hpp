#pragma once

#include <string>
#include <utility>
#include <vector>

#include "topoforge/geometry.hpp"
#include "topoforge/vectorization.hpp"

namespace topoforge {

// 17 significant digits, enough for a lossless double round-trip.
std::string format_double(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// One cloud per line: {"label": int, "points": [[f,...],...]}.
std::string clouds_to_ndjson(const std::vector<LabeledCloud>& clouds);
std::vector<LabeledCloud> clouds_from_ndjson(const std::string& text);

// Plain CSV, one row per point; the whole file is a single cloud.
PointCloud cloud_from_csv(const std::string& text);

// One series per row, first column the integer label.
std::vector<std::pair<int, std::vector<double>>> series_from_csv(const std::string& text);

// One vector per line, comma-separated.
std::string vectors_to_csv(const std::vector<std::vector<double>>& vectors);
std::vector<std::vector<double>> vectors_from_csv(const std::string& text);

// JSON sidecar describing how a vector file was produced.
struct PvParamsFile {
  PvKind kind = PvKind::pi;
  PIParams pi;
  PLParams pl;
  bool normalized = true;
  std::string fingerprint;

  int length() const;
};

std::string pv_params_to_json(const PvParamsFile& p);
PvParamsFile pv_params_from_json(const std::string& text);

}  // namespace topoforge
