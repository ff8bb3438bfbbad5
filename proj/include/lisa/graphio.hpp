// Copyright 2026 The lisa-match Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-text file formats, all UTF-8 with LF line endings and '#' comments.
//
//   gm-matrix v1 <n> <nnz> <dense|sparse>
//   i j w            one line per upper-triangle entry (i <= j), 0-based;
//                    dense files omit zero entries
//
//   gm-points v1 <n>
//   x y              one line per point
//
//   matching JSON: {"n": .., "m": .., "pairs": [[src, tgt], ...],
//                   "algorithm": .., "seconds": ..}
//
// Reals are written as the shortest decimal that parses back to the same
// double, so save/load round trips are exact.

#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lisa/core.hpp"

namespace lisa {

/// Shortest round-trip decimal form of x.
inline std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool is_blank_or_comment(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

inline double parse_real(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ParseError("expected a real number, got '" + std::string(tok) + "'", line);
  }
  return v;
}

template <class Int>
Int parse_int(std::string_view tok, std::size_t line) {
  Int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ParseError("expected an integer, got '" + std::string(tok) + "'", line);
  }
  return v;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

// Next non-comment line; false at end of input.
inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!is_blank_or_comment(line)) return true;
  }
  return false;
}

}  // namespace detail

// --- matrices ---------------------------------------------------------------

inline void write_matrix(const AffinityMatrix& a, std::ostream& out) {
  std::vector<Triplet> entries;
  a.for_each_upper([&](std::size_t i, std::size_t j, double w) {
    if (a.is_sparse() || w != 0.0) entries.push_back({i, j, w});
  });
  out << "gm-matrix v1 " << a.order() << ' ' << entries.size() << ' '
      << (a.is_dense() ? "dense" : "sparse") << '\n';
  for (const auto& e : entries) out << e.row << ' ' << e.col << ' ' << format_real(e.weight) << '\n';
}

inline AffinityMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_content_line(in, line, lineno)) throw ParseError("missing gm-matrix header");
  const auto head = detail::split_ws(line);
  if (head.size() != 5 || head[0] != "gm-matrix" || head[1] != "v1") {
    throw ParseError("expected 'gm-matrix v1 <n> <nnz> <dense|sparse>'", lineno);
  }
  const auto n = detail::parse_int<std::size_t>(head[2], lineno);
  const auto nnz = detail::parse_int<std::size_t>(head[3], lineno);
  if (head[4] != "dense" && head[4] != "sparse") {
    throw ParseError("storage must be 'dense' or 'sparse'", lineno);
  }
  const bool dense = head[4] == "dense";
  if (n == 0) throw ParseError("matrix order must be positive", lineno);

  std::vector<Triplet> entries;
  entries.reserve(nnz);
  while (detail::next_content_line(in, line, lineno)) {
    const auto tok = detail::split_ws(line);
    if (tok.size() != 3) throw ParseError("expected 'i j w'", lineno);
    Triplet t{detail::parse_int<std::size_t>(tok[0], lineno),
              detail::parse_int<std::size_t>(tok[1], lineno), detail::parse_real(tok[2], lineno)};
    if (t.row >= n || t.col >= n) throw ParseError("index outside matrix order", lineno);
    if (t.row > t.col) throw ParseError("entries must be upper-triangle (i <= j)", lineno);
    entries.push_back(t);
  }
  if (entries.size() != nnz) {
    throw ParseError("header declares " + std::to_string(nnz) + " entries, found " +
                     std::to_string(entries.size()));
  }
  if (!dense) return AffinityMatrix::sparse(n, std::move(entries));

  std::vector<double> table(n * n, 0.0);
  std::vector<bool> seen(n * n, false);
  for (const auto& e : entries) {
    if (seen[e.row * n + e.col]) {
      throw ParseError("duplicate entry (" + std::to_string(e.row) + ", " +
                       std::to_string(e.col) + ")");
    }
    seen[e.row * n + e.col] = true;
    table[e.row * n + e.col] = e.weight;
    table[e.col * n + e.row] = e.weight;
  }
  return AffinityMatrix::dense(n, std::move(table));
}

inline void save_matrix(const AffinityMatrix& a, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  write_matrix(a, out);
  detail::finish(out, path);
}

inline AffinityMatrix load_matrix(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  try {
    return read_matrix(in);
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

// --- points -----------------------------------------------------------------

inline void save_points(const PointSet& p, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "gm-points v1 " << p.size() << '\n';
  for (const auto& q : p.points()) out << format_real(q.x) << ' ' << format_real(q.y) << '\n';
  detail::finish(out, path);
}

inline PointSet load_points(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_content_line(in, line, lineno)) throw ParseError("missing gm-points header");
  const auto head = detail::split_ws(line);
  if (head.size() != 3 || head[0] != "gm-points" || head[1] != "v1") {
    throw ParseError("expected 'gm-points v1 <n>'", lineno);
  }
  const auto n = detail::parse_int<std::size_t>(head[2], lineno);
  std::vector<Point> pts;
  pts.reserve(n);
  while (detail::next_content_line(in, line, lineno)) {
    const auto tok = detail::split_ws(line);
    if (tok.size() != 2) throw ParseError("expected 'x y'", lineno);
    pts.push_back({detail::parse_real(tok[0], lineno), detail::parse_real(tok[1], lineno)});
  }
  if (pts.size() != n) {
    throw ParseError("header declares " + std::to_string(n) + " points, found " +
                     std::to_string(pts.size()));
  }
  return PointSet(std::move(pts));
}

// --- matchings --------------------------------------------------------------

struct MatchingFile {
  Matching matching;
  std::string algorithm;
  double seconds = 0.0;
};

inline nlohmann::json matching_to_json(const Matching& m, std::string_view algorithm = "",
                                       double seconds = 0.0) {
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < m.assignment.size(); ++i) pairs.push_back({i, m.assignment[i]});
  return {{"n", m.source_size()},
          {"m", m.target_size},
          {"pairs", std::move(pairs)},
          {"algorithm", std::string(algorithm)},
          {"seconds", seconds}};
}

inline MatchingFile matching_from_json(const nlohmann::json& j) {
  try {
    MatchingFile f;
    const auto n = j.at("n").get<std::size_t>();
    f.matching.target_size = j.at("m").get<std::size_t>();
    f.matching.assignment.assign(n, f.matching.target_size);
    std::vector<bool> have(n, false);
    for (const auto& pair : j.at("pairs")) {
      if (!pair.is_array() || pair.size() != 2) throw ParseError("pairs must be [src, tgt]");
      const auto src = pair[0].get<std::size_t>();
      const auto tgt = pair[1].get<std::size_t>();
      if (src >= n || have[src]) throw ParseError("source index missing, repeated or out of range");
      have[src] = true;
      f.matching.assignment[src] = tgt;
    }
    for (bool h : have)
      if (!h) throw ParseError("every source node needs a pair");
    if (!validate_matching(f.matching)) throw DomainError("matching is not injective");
    if (j.contains("algorithm")) f.algorithm = j.at("algorithm").get<std::string>();
    if (j.contains("seconds")) f.seconds = j.at("seconds").get<double>();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matching JSON: ") + e.what());
  }
}

inline void save_matching(const Matching& m, const std::filesystem::path& path,
                          std::string_view algorithm = "", double seconds = 0.0) {
  auto out = detail::open_out(path);
  out << matching_to_json(m, algorithm, seconds).dump() << '\n';
  detail::finish(out, path);
}

inline MatchingFile load_matching_file(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return matching_from_json(j);
}

inline Matching load_matching(const std::filesystem::path& path) {
  return load_matching_file(path).matching;
}

// --- SNAP-style edge lists --------------------------------------------------

struct EdgeListOptions {
  /// Smallest valid node id; ids below it are rejected.
  long long base = 0;
  /// Read the third column as the weight (missing -> 1).
  bool weighted = false;
  /// Treat every line as undirected. When false, each edge must be listed in
  /// both directions with the same weight.
  bool symmetrize = true;
};

struct EdgeList {
  AffinityMatrix matrix;
  /// original_ids[k] is the file id of node k (first-appearance order).
  std::vector<long long> original_ids;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

/// Parses "u v [w]" lines. Nodes are renumbered 0..n-1 in order of first
/// appearance; repeated edges keep the last weight; self-loops are dropped and
/// counted.
inline EdgeList read_edge_list(std::istream& in, const EdgeListOptions& opts = {}) {
  EdgeList out;
  std::unordered_map<long long, std::size_t> index;
  auto node = [&](long long id) {
    auto [it, inserted] = index.try_emplace(id, out.original_ids.size());
    if (inserted) out.original_ids.push_back(id);
    return it->second;
  };

  std::map<std::pair<std::size_t, std::size_t>, double> undirected;
  std::map<std::pair<std::size_t, std::size_t>, double> directed;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank_or_comment(line)) continue;
    const auto tok = detail::split_ws(line);
    if (tok.size() < 2 || tok.size() > 3) throw ParseError("expected 'u v' or 'u v w'", lineno);
    const auto u_id = detail::parse_int<long long>(tok[0], lineno);
    const auto v_id = detail::parse_int<long long>(tok[1], lineno);
    if (u_id < opts.base || v_id < opts.base) {
      throw ParseError("node id below base " + std::to_string(opts.base), lineno);
    }
    double w = 1.0;
    if (opts.weighted && tok.size() == 3) {
      w = detail::parse_real(tok[2], lineno);
      if (!std::isfinite(w)) throw ParseError("weight must be finite", lineno);
      if (w < 0.0) throw DomainError("line " + std::to_string(lineno) + ": negative weight");
    }
    const std::size_t u = node(u_id);
    const std::size_t v = node(v_id);
    if (u == v) {
      ++out.self_loops_dropped;
      continue;
    }
    if (opts.symmetrize) {
      const auto key = std::minmax(u, v);
      auto [it, inserted] = undirected.insert_or_assign({key.first, key.second}, w);
      if (!inserted) ++out.duplicates_collapsed;
    } else {
      auto [it, inserted] = directed.insert_or_assign({u, v}, w);
      if (!inserted) ++out.duplicates_collapsed;
    }
  }

  if (!opts.symmetrize) {
    for (const auto& [key, w] : directed) {
      const auto rev = directed.find({key.second, key.first});
      if (rev == directed.end() || rev->second != w) {
        throw DomainError("edge " + std::to_string(out.original_ids[key.first]) + " -> " +
                          std::to_string(out.original_ids[key.second]) +
                          " has no matching reverse edge");
      }
      if (key.first < key.second) {
        undirected[{key.first, key.second}] = w;
      } else {
        ++out.duplicates_collapsed;
      }
    }
  }

  if (undirected.empty()) throw DegenerateError("edge list contains no edges");
  std::vector<Triplet> entries;
  entries.reserve(undirected.size());
  for (const auto& [key, w] : undirected) entries.push_back({key.first, key.second, w});
  out.matrix = AffinityMatrix::sparse(out.original_ids.size(), std::move(entries));
  return out;
}

inline EdgeList load_edge_list(const std::filesystem::path& path, const EdgeListOptions& opts = {}) {
  auto in = detail::open_in(path);
  try {
    return read_edge_list(in, opts);
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

}  // namespace lisa
