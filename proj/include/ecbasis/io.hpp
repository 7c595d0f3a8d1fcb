#pragma once

#include <string>
#include <vector>

#include "ecbasis/bsurface.hpp"

namespace ecbasis {

// Header row, then one row per sample at 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header, const DenseMatrix& rows);
// Parses a file produced by write_csv.
DenseMatrix read_csv(const std::string& path, std::vector<std::string>* header = nullptr);

struct Polyline {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// One polyline per entry, scaled into a common frame with axes.
void write_svg(const std::string& path, const std::string& title, const std::vector<Polyline>& lines);

// v, vn, vt and f records with 1-based indices; vertex colors are appended to
// the v records.
void write_obj(const std::string& path, const TriangleMesh& mesh);

}  // namespace ecbasis
