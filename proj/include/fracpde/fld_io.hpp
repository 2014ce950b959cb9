// FLD1 snapshot format: one ASCII header line
//   FLD1 d=<dim> M=<points> t=<time>
// followed by the node values as little-endian 64-bit floats, row-major.
#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fracpde/torus.hpp"

namespace fracpde {

inline void write_fld(const std::string& path, const GridField& f, double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_fld: cannot open " + path);
  char header[96];
  std::snprintf(header, sizeof(header), "FLD1 d=%d M=%d t=%.17g\n", f.grid.dim,
                f.grid.points, t);
  out << header;
  static_assert(sizeof(double) == 8);
  // node values are IEEE doubles; this writer assumes a little-endian host
  out.write(reinterpret_cast<const char*>(f.samples.data()),
            static_cast<std::streamsize>(f.samples.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_fld: short write to " + path);
}

struct FldSnapshot {
  GridField field;
  double t;
};

inline FldSnapshot read_fld(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_fld: cannot open " + path);
  std::string header;
  std::getline(in, header);
  int dim = 0, points = 0;
  double t = 0.0;
  if (std::sscanf(header.c_str(), "FLD1 d=%d M=%d t=%lf", &dim, &points, &t) != 3) {
    throw std::runtime_error("read_fld: bad header in " + path);
  }
  TorusGrid grid(dim, points);
  std::vector<double> samples(grid.total());
  in.read(reinterpret_cast<char*>(samples.data()),
          static_cast<std::streamsize>(samples.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_fld: short read from " + path);
  return {GridField(grid, std::move(samples)), t};
}

}  // namespace fracpde
