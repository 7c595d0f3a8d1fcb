#include "ecbasis/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ecbasis/error.hpp"

namespace ecbasis {

namespace {

std::string format(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to " + path + " failed");
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header, const DenseMatrix& rows) {
  if (!header.empty() && header.size() != rows.cols())
    throw Error(ErrorCode::DimensionMismatch, "CSV header does not match column count");
  auto out = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    for (std::size_t c = 0; c < rows.cols(); ++c) out << (c ? "," : "") << format(rows(r, c), 17);
    out << '\n';
  }
  finish(out, path);
}

DenseMatrix read_csv(const std::string& path, std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::string line;
  std::vector<std::string> names;
  if (std::getline(in, line)) {
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) names.push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::IoFailure, "malformed CSV cell '" + cell + "' in " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::IoFailure, "ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  DenseMatrix m(rows.size(), rows.empty() ? names.size() : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  if (header) *header = std::move(names);
  return m;
}

void write_svg(const std::string& path, const std::string& title, const std::vector<Polyline>& lines) {
  constexpr double kWidth = 800, kHeight = 500, kMargin = 50;
  static constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                             "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& l : lines) {
    if (l.x.size() != l.y.size()) throw Error(ErrorCode::DimensionMismatch, "polyline coordinate lengths differ");
    for (std::size_t i = 0; i < l.x.size(); ++i) {
      if (!std::isfinite(l.x[i]) || !std::isfinite(l.y[i])) continue;
      x0 = std::min(x0, l.x[i]), x1 = std::max(x1, l.x[i]);
      y0 = std::min(y0, l.y[i]), y1 = std::max(y1, l.y[i]);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 <= 0) x1 = x0 + 1;
  if (y1 - y0 <= 0) y1 = y0 + 1;
  const auto sx = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
  const auto sy = [&](double y) { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<title>" << escape_xml(title) << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
      << kHeight - kMargin << "\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin
      << "\"/>\n</g>\n";
  out << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\" text-anchor=\"middle\">"
      << format(x0, 6) << "</text>\n";
  out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\" text-anchor=\"middle\">"
      << format(x1, 6) << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin << "\" text-anchor=\"end\">" << format(y0, 6)
      << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4 << "\" text-anchor=\"end\">" << format(y1, 6)
      << "</text>\n</g>\n";
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto& l = lines[k];
    out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[k % std::size(kPalette)] << "\"";
    if (!l.label.empty()) out << " data-label=\"" << escape_xml(l.label) << "\"";
    out << " points=\"";
    for (std::size_t i = 0; i < l.x.size(); ++i) {
      if (!std::isfinite(l.x[i]) || !std::isfinite(l.y[i])) continue;
      out << (i ? " " : "") << format(sx(l.x[i]), 7) << ',' << format(sy(l.y[i]), 7);
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  finish(out, path);
}

void write_obj(const std::string& path, const TriangleMesh& mesh) {
  const std::size_t n = mesh.positions.size();
  if (mesh.normals.size() != n || mesh.texcoords.size() != n || mesh.colors.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "mesh attribute arrays differ in length");
  auto out = open_out(path);
  out << "# " << n << " vertices, " << mesh.faces.size() << " faces\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = mesh.positions[i];
    const auto& c = mesh.colors[i];
    out << "v " << format(p[0], 17) << ' ' << format(p[1], 17) << ' ' << format(p[2], 17) << ' ' << format(c[0], 6)
        << ' ' << format(c[1], 6) << ' ' << format(c[2], 6) << '\n';
  }
  for (const auto& v : mesh.normals)
    out << "vn " << format(v[0], 17) << ' ' << format(v[1], 17) << ' ' << format(v[2], 17) << '\n';
  for (const auto& t : mesh.texcoords) out << "vt " << format(t[0], 17) << ' ' << format(t[1], 17) << '\n';
  for (const auto& f : mesh.faces) {
    out << 'f';
    for (auto idx : f) out << ' ' << idx + 1 << '/' << idx + 1 << '/' << idx + 1;
    out << '\n';
  }
  finish(out, path);
}

}  // namespace ecbasis
