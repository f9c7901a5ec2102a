// File I/O for the CLI: matrix/vector CSV and JSON, SampleSpace JSON,
// sample-path CSV, relevance CSV with doc-id headers, clusters JSON.
// Doubles are always written with 17 significant digits so identical inputs
// produce byte-identical files.

#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pbn/core_prob.hpp"
#include "pbn/doc_cluster.hpp"
#include "pbn/errors.hpp"
#include "pbn/processes.hpp"

namespace pbn {

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace detail {

inline double parse_double(const std::string& field, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": bad number '" + field + "'");
  }
  if (used != field.size()) {
    throw ParseError(where + ": bad number '" + field + "'");
  }
  return v;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace detail

// One matrix row per line, comma separated.
inline Eigen::MatrixXd read_matrix_csv(std::istream& in,
                                       const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto where = source + ":" + std::to_string(line_no);
    std::vector<double> row;
    for (const auto& field : detail::split(line, ',')) {
      row.push_back(detail::parse_double(field, where));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(where + ": ragged row (expected " +
                       std::to_string(rows.front().size()) + " fields)");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(source + ": no data rows");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

inline Eigen::MatrixXd read_matrix_json(const std::string& path) {
  const auto j = detail::load_json(path);
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ParseError(path + ": expected a JSON array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(path + ": ragged row " + std::to_string(i));
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_number()) {
        throw ParseError(path + ": non-numeric entry in row " +
                         std::to_string(i));
      }
      m(i, k) = cell.get<double>();
    }
  }
  return m;
}

// Dispatch on extension: .json is JSON, anything else CSV.
inline Eigen::MatrixXd read_matrix(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return read_matrix_json(path);
  }
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  return read_matrix_csv(in, path);
}

inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

inline void write_matrix_csv(const std::string& path,
                             const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open '" + path + "' for writing");
  }
  write_matrix_csv(out, m);
}

// Values separated by commas and/or newlines; a single row or a single
// column both parse to the same vector.
inline Eigen::VectorXd read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto where = path + ":" + std::to_string(line_no);
    for (const auto& field : detail::split(line, ',')) {
      values.push_back(detail::parse_double(field, where));
    }
  }
  if (values.empty()) {
    throw ParseError(path + ": no values");
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(),
                                     static_cast<Eigen::Index>(values.size()));
}

// {"labels": [...], "masses": [...]}
inline SampleSpace read_sample_space_json(const std::string& path) {
  const auto j = detail::load_json(path);
  if (!j.is_object() || !j.contains("labels") || !j.contains("masses")) {
    throw ParseError(path + ": expected {\"labels\": [...], \"masses\": [...]}");
  }
  std::vector<std::string> labels;
  std::vector<double> masses;
  for (const auto& v : j["labels"]) {
    if (!v.is_string()) throw ParseError(path + ": labels must be strings");
    labels.push_back(v.get<std::string>());
  }
  for (const auto& v : j["masses"]) {
    if (!v.is_number()) throw ParseError(path + ": masses must be numbers");
    masses.push_back(v.get<double>());
  }
  return SampleSpace(labels, masses);
}

inline void write_sample_space_json(std::ostream& out,
                                    const SampleSpace& space) {
  out << "{\"labels\": [";
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i > 0) out << ", ";
    out << nlohmann::json(space.labels()[i]).dump();
  }
  out << "], \"masses\": [";
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i > 0) out << ", ";
    out << format_double(space.masses()[i]);
  }
  out << "]}\n";
}

inline void write_sample_space_json(const std::string& path,
                                    const SampleSpace& space) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open '" + path + "' for writing");
  }
  write_sample_space_json(out, space);
}

// One row per sampled point: path_id,t,value.
inline void write_paths_csv(std::ostream& out,
                            const std::vector<SamplePath>& paths) {
  out << "path_id,t,value\n";
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto& path = paths[p];
    for (std::size_t i = 0; i < path.times.size(); ++i) {
      out << p << ',' << format_double(path.times[i]) << ','
          << format_double(path.values[i]) << '\n';
    }
  }
}

inline void write_paths_csv(const std::string& path,
                            const std::vector<SamplePath>& paths) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open '" + path + "' for writing");
  }
  write_paths_csv(out, paths);
}

// Header row and column carry the doc ids.
inline void write_relevance_csv(std::ostream& out, const RelevanceMatrix& r) {
  out << "doc";
  for (const auto& id : r.docs()) out << ',' << id;
  out << '\n';
  const int n = static_cast<int>(r.size());
  for (int i = 0; i < n; ++i) {
    out << r.docs()[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      out << ',' << format_double(r.entry(i, j));
    }
    out << '\n';
  }
}

inline void write_relevance_csv(const std::string& path,
                                const RelevanceMatrix& r) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open '" + path + "' for writing");
  }
  write_relevance_csv(out, r);
}

// {"clusters": [[doc ids]...], "threshold": x}
inline void write_clusters_json(std::ostream& out, const Clustering& clusters,
                                const std::vector<std::string>& docs) {
  out << "{\"clusters\": [";
  for (std::size_t c = 0; c < clusters.clusters.size(); ++c) {
    if (c > 0) out << ", ";
    out << '[';
    const auto& members = clusters.clusters[c];
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0) out << ", ";
      out << nlohmann::json(docs.at(static_cast<std::size_t>(members[i])))
                 .dump();
    }
    out << ']';
  }
  out << "], \"threshold\": " << format_double(clusters.threshold) << "}\n";
}

inline void write_clusters_json(const std::string& path,
                                const Clustering& clusters,
                                const std::vector<std::string>& docs) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open '" + path + "' for writing");
  }
  write_clusters_json(out, clusters, docs);
}

}  // namespace pbn
