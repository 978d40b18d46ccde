#pragma once

// Mesh data model and the canonical JSON mesh / family-manifest formats:
//
//   {"ambient_dimension": d, "vertices": [[x, ...], ...], "cells": [[i0, ..., id], ...]}
//   {"meshes": ["path0", "path1", ...]}

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "minangle/geometry.hpp"

namespace minangle {

struct Mesh {
  std::size_t ambient_dim = 0;
  std::vector<Point> vertices;
  std::vector<std::vector<std::size_t>> cells;

  std::size_t cell_count() const noexcept { return cells.size(); }

  Simplex cell_simplex(std::size_t c) const {
    const auto& idx = cells.at(c);
    std::vector<Point> v;
    v.reserve(idx.size());
    for (std::size_t i : idx) v.push_back(vertices.at(i));
    return Simplex(std::move(v));
  }

  bool operator==(const Mesh&) const = default;
};

/// Mesh with a single cell spanning all vertices of the simplex.
inline Mesh single_cell_mesh(const Simplex& s) {
  Mesh m;
  m.ambient_dim = s.ambient_dim();
  m.vertices = s.vertices();
  m.cells.emplace_back(s.vertex_count());
  for (std::size_t i = 0; i < s.vertex_count(); ++i) m.cells.front()[i] = i;
  return m;
}

namespace detail {

inline std::size_t json_index(const nlohmann::json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer()) {
    if (v.get<long long>() < 0) throw InputError(where + ": negative index");
    return static_cast<std::size_t>(v.get<long long>());
  }
  throw InputError(where + ": expected a non-negative integer");
}

}  // namespace detail

inline Mesh mesh_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("mesh document: top level must be an object");
  for (const char* key : {"ambient_dimension", "vertices", "cells"}) {
    if (!doc.contains(key)) throw InputError(std::string("mesh document: missing field \"") + key + "\"");
  }
  Mesh m;
  m.ambient_dim = detail::json_index(doc["ambient_dimension"], "ambient_dimension");
  if (m.ambient_dim < 2) throw InputError("ambient_dimension: must be at least 2");

  const auto& verts = doc["vertices"];
  if (!verts.is_array()) throw InputError("vertices: expected an array");
  m.vertices.reserve(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    const auto& v = verts[i];
    if (!v.is_array()) throw InputError(where + ": expected an array of coordinates");
    if (v.size() != m.ambient_dim) {
      throw InputError(where + ": has " + std::to_string(v.size()) + " coordinates, expected " +
                       std::to_string(m.ambient_dim));
    }
    Point p;
    p.reserve(v.size());
    for (std::size_t a = 0; a < v.size(); ++a) {
      if (!v[a].is_number()) throw InputError(where + "[" + std::to_string(a) + "]: expected a number");
      const double x = v[a].get<double>();
      if (!std::isfinite(x)) throw InputError(where + "[" + std::to_string(a) + "]: non-finite coordinate");
      p.push_back(x);
    }
    m.vertices.push_back(std::move(p));
  }

  const auto& cells = doc["cells"];
  if (!cells.is_array()) throw InputError("cells: expected an array");
  if (cells.empty()) throw InputError("cells: mesh has no cells");
  m.cells.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::string where = "cells[" + std::to_string(c) + "]";
    const auto& cell = cells[c];
    if (!cell.is_array()) throw InputError(where + ": expected an array of vertex indices");
    if (cell.size() != m.ambient_dim + 1) {
      throw InputError(where + ": has " + std::to_string(cell.size()) + " indices, expected " +
                       std::to_string(m.ambient_dim + 1));
    }
    std::vector<std::size_t> idx;
    idx.reserve(cell.size());
    for (std::size_t a = 0; a < cell.size(); ++a) {
      const std::size_t v = detail::json_index(cell[a], where + "[" + std::to_string(a) + "]");
      if (v >= m.vertices.size()) {
        throw InputError(where + "[" + std::to_string(a) + "]: vertex index " + std::to_string(v) +
                         " out of range (" + std::to_string(m.vertices.size()) + " vertices)");
      }
      if (std::find(idx.begin(), idx.end(), v) != idx.end()) {
        throw InputError(where + ": repeated vertex index " + std::to_string(v));
      }
      idx.push_back(v);
    }
    m.cells.push_back(std::move(idx));
  }
  return m;
}

inline Mesh parse_mesh(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed mesh document: ") + e.what());
  }
  return mesh_from_json(doc);
}

inline Mesh parse_mesh(const std::string& text) {
  std::istringstream in(text);
  return parse_mesh(in);
}

inline Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mesh file " + path.string());
  try {
    return parse_mesh(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

inline nlohmann::ordered_json mesh_to_json(const Mesh& m) {
  nlohmann::ordered_json doc;
  doc["ambient_dimension"] = m.ambient_dim;
  doc["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : m.vertices) doc["vertices"].push_back(v);
  doc["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : m.cells) doc["cells"].push_back(c);
  return doc;
}

/// Doubles are written in shortest round-trip form, so parse(write(m)) == m bitwise.
inline void write_mesh(const Mesh& m, std::ostream& out) { out << mesh_to_json(m).dump(2) << '\n'; }

inline std::string write_mesh(const Mesh& m) {
  std::ostringstream out;
  write_mesh(m, out);
  return out.str();
}

struct FamilyManifest {
  std::vector<std::filesystem::path> meshes;
};

/// Relative member paths resolve against the manifest's directory.
inline FamilyManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed manifest: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("meshes") || !doc["meshes"].is_array()) {
    throw InputError("manifest: expected an object with a \"meshes\" array");
  }
  FamilyManifest fm;
  for (std::size_t i = 0; i < doc["meshes"].size(); ++i) {
    const auto& p = doc["meshes"][i];
    if (!p.is_string()) throw InputError("meshes[" + std::to_string(i) + "]: expected a path string");
    std::filesystem::path path = p.get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    fm.meshes.push_back(std::move(path));
  }
  if (fm.meshes.empty()) throw InputError("manifest: \"meshes\" is empty");
  return fm;
}

inline FamilyManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path.string());
  return parse_manifest(in, path.parent_path());
}

struct ValidationReport {
  std::vector<std::size_t> degenerate_cells;
  std::vector<std::size_t> unused_vertices;
  std::vector<std::pair<std::size_t, std::size_t>> duplicate_cells;  // (first occurrence, duplicate)

  bool empty() const { return degenerate_cells.empty() && unused_vertices.empty() && duplicate_cells.empty(); }
};

inline ValidationReport validate_mesh(const Mesh& m, const ToleranceConfig& cfg = {}) {
  ValidationReport r;
  std::vector<bool> used(m.vertices.size(), false);
  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    for (std::size_t v : m.cells[c]) used[v] = true;
    if (is_degenerate(m.cell_simplex(c), cfg)) r.degenerate_cells.push_back(c);
    auto key = m.cells[c];
    std::sort(key.begin(), key.end());
    auto [it, inserted] = seen.emplace(std::move(key), c);
    if (!inserted) r.duplicate_cells.emplace_back(it->second, c);
  }
  for (std::size_t v = 0; v < used.size(); ++v) {
    if (!used[v]) r.unused_vertices.push_back(v);
  }
  return r;
}

struct FacetViolation {
  std::vector<std::size_t> facet;  // sorted vertex indices
  std::vector<std::size_t> cells;
};

struct ConformityReport {
  std::size_t boundary_facets = 0;
  std::size_t interior_facets = 0;
  std::vector<FacetViolation> violations;

  bool conforming() const { return violations.empty(); }
};

/// Combinatorial check only: every (d-1)-facet index set may be shared by at most two cells.
inline ConformityReport conformity_check(const Mesh& m) {
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> owners;
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& cell = m.cells[c];
    for (std::size_t skip = 0; skip < cell.size(); ++skip) {
      std::vector<std::size_t> f;
      f.reserve(cell.size() - 1);
      for (std::size_t a = 0; a < cell.size(); ++a) {
        if (a != skip) f.push_back(cell[a]);
      }
      std::sort(f.begin(), f.end());
      owners[std::move(f)].push_back(c);
    }
  }
  ConformityReport r;
  for (auto& [f, cells] : owners) {
    if (cells.size() == 1) {
      ++r.boundary_facets;
    } else if (cells.size() == 2) {
      ++r.interior_facets;
    } else {
      r.violations.push_back({f, cells});
    }
  }
  return r;
}

}  // namespace minangle
