#include "fbp/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "fbp/error.hpp"

namespace fbp {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& out, const ScalarField& u) {
  const Grid2D& g = u.grid();
  out << "nx,ny,h,origin_x,origin_y\n";
  out << g.nx() << ',' << g.ny() << ',' << format_double(g.h()) << ',' << format_double(g.origin().x) << ','
      << format_double(g.origin().y) << '\n';
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (i) out << ',';
      out << format_double(u(i, j));
    }
    out << '\n';
  }
}

namespace {

std::vector<double> parse_row(const std::string& line, int line_no) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw Error(ErrorCode::IoFailure, "bad number '" + cell + "' on line " + std::to_string(line_no));
    }
  }
  return v;
}

}  // namespace

ScalarField read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("nx,ny,h", 0) != 0) {
    throw Error(ErrorCode::IoFailure, "missing field CSV header");
  }
  if (!std::getline(in, line)) throw Error(ErrorCode::IoFailure, "missing grid line");
  const auto head = parse_row(line, 2);
  if (head.size() != 5) throw Error(ErrorCode::IoFailure, "grid line needs 5 entries");
  const Grid2D g({head[3], head[4]}, head[2], static_cast<int>(head[0]), static_cast<int>(head[1]));
  ScalarField u(g);
  for (int j = 0; j < g.ny(); ++j) {
    if (!std::getline(in, line)) throw Error(ErrorCode::IoFailure, "field CSV ends early");
    const auto row = parse_row(line, j + 3);
    if (static_cast<int>(row.size()) != g.nx()) {
      throw Error(ErrorCode::IoFailure, "row " + std::to_string(j) + " has wrong length");
    }
    for (int i = 0; i < g.nx(); ++i) u(i, j) = row[static_cast<std::size_t>(i)];
  }
  u.tag_edges_dirichlet();
  return u;
}

void save_field_csv(const std::string& path, const ScalarField& u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  write_field_csv(out, u);
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

ScalarField load_field_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  return read_field_csv(in);
}

void save_field_pgm(const std::string& path, const ScalarField& u) {
  const Grid2D& g = u.grid();
  double lo = INFINITY, hi = -INFINITY;
  for (double v : u.values()) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << "P5\n" << g.nx() << ' ' << g.ny() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(g.nx()));
  for (int j = g.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double v = u(i, j);
      const double t = std::isfinite(v) ? (v - lo) / span : 0.0;
      row[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

}  // namespace fbp
