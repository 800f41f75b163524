#include "topoforge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topoforge {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string clouds_to_ndjson(const std::vector<LabeledCloud>& clouds) {
  std::string out;
  for (const auto& lc : clouds) {
    // Hand-rolled so coordinates keep the fixed 17-digit form.
    out += "{\"label\": " + std::to_string(lc.label) + ", \"points\": [";
    for (int i = 0; i < lc.cloud.size(); ++i) {
      if (i) out += ", ";
      out += '[';
      for (int k = 0; k < lc.cloud.dim(); ++k) {
        if (k) out += ", ";
        out += format_double(lc.cloud.point(i)[k]);
      }
      out += ']';
    }
    out += "]}\n";
  }
  return out;
}

std::vector<LabeledCloud> clouds_from_ndjson(const std::string& text) {
  std::vector<LabeledCloud> clouds;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      LabeledCloud lc;
      lc.label = j.at("label").get<int>();
      for (const auto& pt : j.at("points"))
        lc.cloud.push_back(pt.get<std::vector<double>>());
      if (lc.cloud.size() == 0) throw std::runtime_error("empty cloud");
      clouds.push_back(std::move(lc));
    } catch (const std::exception& e) {
      throw std::runtime_error("cloud file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return clouds;
}

namespace {

std::vector<double> parse_number_row(const std::string& line, size_t lineno) {
  std::vector<double> row;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t comma = line.find(',', pos);
    std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
    size_t used = 0;
    double v;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": bad number '" + cell + "'");
    }
    if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
      throw std::runtime_error("line " + std::to_string(lineno) + ": trailing junk '" + cell + "'");
    row.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return row;
}

}  // namespace

PointCloud cloud_from_csv(const std::string& text) {
  PointCloud cloud;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    cloud.push_back(parse_number_row(line, lineno));
  }
  if (cloud.size() == 0) throw std::runtime_error("cloud CSV has no points");
  return cloud;
}

std::vector<std::pair<int, std::vector<double>>> series_from_csv(const std::string& text) {
  std::vector<std::pair<int, std::vector<double>>> out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row = parse_number_row(line, lineno);
    if (row.size() < 2)
      throw std::runtime_error("line " + std::to_string(lineno) + ": series needs label + values");
    int label = static_cast<int>(row[0]);
    if (label != row[0] || label < 0)
      throw std::runtime_error("line " + std::to_string(lineno) + ": label must be a nonnegative integer");
    out.emplace_back(label, std::vector<double>(row.begin() + 1, row.end()));
  }
  return out;
}

std::string vectors_to_csv(const std::vector<std::vector<double>>& vectors) {
  std::string out;
  for (const auto& v : vectors) {
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += format_double(v[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<double>> vectors_from_csv(const std::string& text) {
  std::vector<std::vector<double>> out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_number_row(line, lineno));
    if (out.size() > 1 && out.back().size() != out.front().size())
      throw std::runtime_error("line " + std::to_string(lineno) + ": ragged vector length");
  }
  return out;
}

int PvParamsFile::length() const {
  return kind == PvKind::pi ? pi.nx * pi.ny : pl.k_max * pl.resolution;
}

std::string pv_params_to_json(const PvParamsFile& p) {
  nlohmann::json j;
  j["normalized"] = p.normalized;
  j["fingerprint"] = p.fingerprint;
  if (p.kind == PvKind::pi) {
    j["kind"] = "pi";
    const char* wname = p.pi.weight == PiWeight::ten_tanh_persistence ? "ten_tanh_persistence"
                        : p.pi.weight == PiWeight::persistence_squared ? "persistence_squared"
                                                                        : "constant_one";
    j["params"] = {{"nx", p.pi.nx},     {"ny", p.pi.ny},       {"x0", p.pi.x0},
                   {"x1", p.pi.x1},     {"y0", p.pi.y0},       {"y1", p.pi.y1},
                   {"sigma", p.pi.sigma}, {"weight", wname},
                   {"global_scale", p.pi.global_scale}};
  } else {
    j["kind"] = "pl";
    j["params"] = {{"k_max", p.pl.k_max},
                   {"resolution", p.pl.resolution},
                   {"t0", p.pl.t0},
                   {"t1", p.pl.t1}};
  }
  return j.dump(2) + "\n";
}

PvParamsFile pv_params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    PvParamsFile p;
    p.normalized = j.at("normalized").get<bool>();
    p.fingerprint = j.value("fingerprint", "");
    std::string kind = j.at("kind").get<std::string>();
    const auto& params = j.at("params");
    if (kind == "pi") {
      p.kind = PvKind::pi;
      p.pi.nx = params.at("nx").get<int>();
      p.pi.ny = params.at("ny").get<int>();
      p.pi.x0 = params.at("x0").get<double>();
      p.pi.x1 = params.at("x1").get<double>();
      p.pi.y0 = params.at("y0").get<double>();
      p.pi.y1 = params.at("y1").get<double>();
      p.pi.sigma = params.at("sigma").get<double>();
      p.pi.global_scale = params.value("global_scale", 1.0);
      std::string w = params.at("weight").get<std::string>();
      if (w == "ten_tanh_persistence")
        p.pi.weight = PiWeight::ten_tanh_persistence;
      else if (w == "persistence_squared")
        p.pi.weight = PiWeight::persistence_squared;
      else if (w == "constant_one")
        p.pi.weight = PiWeight::constant_one;
      else
        throw std::runtime_error("unknown weight " + w);
      p.pi.validate();
      std::string expect = pi_fingerprint(p.pi, p.normalized);
      if (!p.fingerprint.empty() && p.fingerprint != expect)
        throw std::runtime_error("fingerprint does not match parameters");
      p.fingerprint = expect;
    } else if (kind == "pl") {
      p.kind = PvKind::pl;
      p.pl.k_max = params.at("k_max").get<int>();
      p.pl.resolution = params.at("resolution").get<int>();
      p.pl.t0 = params.at("t0").get<double>();
      p.pl.t1 = params.at("t1").get<double>();
      p.pl.validate();
      std::string expect = pl_fingerprint(p.pl, p.normalized);
      if (!p.fingerprint.empty() && p.fingerprint != expect)
        throw std::runtime_error("fingerprint does not match parameters");
      p.fingerprint = expect;
    } else {
      throw std::runtime_error("unknown vectorization kind " + kind);
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("params sidecar: ") + e.what());
  }
}

}  // namespace topoforge
