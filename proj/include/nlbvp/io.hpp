// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlbvp/boundary_triple.hpp"

namespace nlbvp
{

using json = nlohmann::ordered_json;

namespace io
{

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// Nested array of rows of [re, im] pairs.
inline json to_json(const Mat &M)
{
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i)
  {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j)
    {
      row.push_back(to_json(M(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const Vec &v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    out.push_back(to_json(v(i)));
  }
  return out;
}

/// A number, or a [re, im] pair.
inline cplx complex_from_json(const json &j, const std::string &what)
{
  if (j.is_number())
  {
    return {j.get<double>(), 0.0};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
  {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(ErrorKind::ConfigError, what + ": expected a number or a [re, im] pair");
}

/// Matrix from nested rows whose entries are numbers or [re, im] pairs.
/// A bare number c denotes c * I of the requested size (when `identity_dim` >= 0).
inline Mat matrix_from_json(const json &j, const std::string &what, Eigen::Index identity_dim = -1)
{
  if (j.is_number())
  {
    if (identity_dim < 0)
    {
      fail(ErrorKind::ConfigError, what + ": a scalar is not allowed here");
    }
    return j.get<double>() * Mat::Identity(identity_dim, identity_dim);
  }
  if (!j.is_array())
  {
    fail(ErrorKind::ConfigError, what + ": expected a matrix (array of rows)");
  }
  const Eigen::Index r = static_cast<Eigen::Index>(j.size());
  if (r == 0)
  {
    return Mat(0, 0);
  }
  if (!j[0].is_array())
  {
    fail(ErrorKind::ConfigError, what + ": rows must be arrays");
  }
  const Eigen::Index c = static_cast<Eigen::Index>(j[0].size());
  Mat M(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
  {
    const json &row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
    {
      fail(ErrorKind::ConfigError, what + ": ragged matrix");
    }
    for (Eigen::Index k = 0; k < c; ++k)
    {
      M(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], what);
    }
  }
  return M;
}

inline json space_to_json(const KreinSpace &K)
{
  return json{{"dim", K.dim()}, {"gram", to_json(K.gram())}, {"J", to_json(K.J())}};
}

inline json triple_to_json(const BoundaryTriple &bt)
{
  return json{{"state", space_to_json(bt.state())},
              {"boundary", json{{"dim", bt.g()}, {"gram", to_json(bt.boundary_gram())}}},
              {"T_basis", to_json(bt.param())},
              {"G0", to_json(bt.G0())},
              {"G1", to_json(bt.G1())}};
}

inline BoundaryTriple triple_from_json(const json &j)
{
  const json &s = j.at("state");
  KreinSpace K(matrix_from_json(s.at("gram"), "state.gram"),
               s.contains("J") ? matrix_from_json(s.at("J"), "state.J") : Mat());
  Mat Gb = j.contains("boundary") && j.at("boundary").contains("gram")
               ? matrix_from_json(j.at("boundary").at("gram"), "boundary.gram")
               : Mat();
  return BoundaryTriple(K, matrix_from_json(j.at("T_basis"), "T_basis"), matrix_from_json(j.at("G0"), "G0"),
                        matrix_from_json(j.at("G1"), "G1"), Gb);
}

/// Shortest round-trip formatting is not needed in CSV; 17 significant digits are exact.
inline std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter
{
public:
  explicit CsvWriter(const std::string &path) : out_(path)
  {
    if (!out_)
    {
      fail(ErrorKind::IOError, "cannot open " + path + " for writing");
    }
  }

  void header(const std::vector<std::string> &cols) { line(cols); }

  void row(const std::vector<double> &vals)
  {
    std::vector<std::string> s;
    s.reserve(vals.size());
    for (double v : vals)
    {
      s.push_back(fmt(v));
    }
    line(s);
  }

private:
  void line(const std::vector<std::string> &cells)
  {
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
      out_ << (i ? "," : "") << cells[i];
    }
    out_ << '\n';
  }

  std::ofstream out_;
};

inline json read_json_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    fail(ErrorKind::IOError, "cannot open " + path);
  }
  try
  {
    return json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    fail(ErrorKind::ConfigError, path + ": " + e.what());
  }
}

inline void write_json_file(const std::string &path, const json &j)
{
  std::ofstream out(path);
  if (!out)
  {
    fail(ErrorKind::IOError, "cannot open " + path + " for writing");
  }
  out << j.dump(2) << '\n';
}

/// Vector from a CSV file with one "re[,im]" entry per line (header lines starting
/// with a letter are skipped).
inline Vec read_vector_csv(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    fail(ErrorKind::IOError, "cannot open " + path);
  }
  std::vector<cplx> vals;
  std::string line;
  while (std::getline(in, line))
  {
    if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0])))
    {
      continue;
    }
    std::stringstream ss(line);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    try
    {
      vals.emplace_back(std::stod(a), b.empty() ? 0.0 : std::stod(b));
    }
    catch (const std::exception &)
    {
      fail(ErrorKind::ConfigError, path + ": malformed line '" + line + "'");
    }
  }
  Vec v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
  {
    v(static_cast<Eigen::Index>(i)) = vals[i];
  }
  return v;
}

}  // namespace io

}  // namespace nlbvp
