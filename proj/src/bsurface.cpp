#include "ecbasis/bsurface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ecbasis/error.hpp"
#include "parallel.hpp"

namespace ecbasis {

namespace {

Point3 operator+(Point3 a, const Point3& b) {
  for (int k = 0; k < 3; ++k) a[k] += b[k];
  return a;
}
Point3 operator*(double s, Point3 a) {
  for (double& v : a) v *= s;
  return a;
}
double dot(const Point3& a, const Point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Point3 cross(const Point3& a, const Point3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

double grid_value(const ECSpace& s, int i, int m) {
  if (i == m - 1) return s.beta();
  return s.alpha() + (s.beta() - s.alpha()) * i / (m - 1);
}

void check_grid(int m0, int m1) {
  if (m0 < 2 || m1 < 2) throw Error(ErrorCode::InvalidArgument, "grid must be at least 2x2");
}

[[noreturn]] void degenerate(double u0, double u1) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "degenerate surface point (" << u0 << ", " << u1 << ")";
  throw Error(ErrorCode::DegeneratePoint, msg.str());
}

// Partials up to order two at one parameter pair; d[j0][j1].
struct Jet {
  Point3 d[3][3] = {};
};

Jet jet(const BSurface& s, double u0, double u1) {
  std::vector<double> b0[3], b1[3];
  for (int j = 0; j < 3; ++j) {
    b0[j] = s.space(Direction::U0).b_all(j, u0);
    b1[j] = s.space(Direction::U1).b_all(j, u1);
  }
  Jet out;
  for (std::size_t i0 = 0; i0 < s.rows(); ++i0)
    for (std::size_t i1 = 0; i1 < s.cols(); ++i1) {
      const Point3& p = s.point(i0, i1);
      for (int j0 = 0; j0 < 3; ++j0)
        for (int j1 = 0; j0 + j1 < 3; ++j1) {
          const double w = b0[j0][i0] * b1[j1][i1];
          for (int k = 0; k < 3; ++k) out.d[j0][j1][k] += w * p[k];
        }
    }
  return out;
}

struct Curvatures {
  double gaussian;
  double mean;
  double area_element;
};

Curvatures curvatures(const Jet& j, double u0, double u1) {
  const Point3 &su = j.d[1][0], &sv = j.d[0][1];
  const double e = dot(su, su), f = dot(su, sv), g = dot(sv, sv);
  const double det = e * g - f * f;
  if (det < 1e-14) degenerate(u0, u1);
  const Point3 n = (1.0 / std::sqrt(det)) * cross(su, sv);
  const double l = dot(j.d[2][0], n), m = dot(j.d[1][1], n), nn = dot(j.d[0][2], n);
  return {(l * nn - m * m) / det, (e * nn - 2 * f * m + g * l) / (2 * det), std::sqrt(det)};
}

double field_value(FieldKind kind, const Jet& j, double u0, double u1) {
  if (kind == FieldKind::Coordinate) return j.d[0][0][2];
  const auto c = curvatures(j, u0, u1);
  const double h2 = c.mean * c.mean;
  const auto log_scale = [](double raw) { return std::log1p(std::max(raw, 0.0)); };
  switch (kind) {
    case FieldKind::Gaussian: return c.gaussian;
    case FieldKind::Mean: return c.mean;
    case FieldKind::Willmore: return h2;
    case FieldKind::LogWillmore: return log_scale(h2);
    case FieldKind::Umbilic: return h2 - c.gaussian;
    case FieldKind::LogUmbilic: return log_scale(h2 - c.gaussian);
    case FieldKind::Total: return 4 * h2 - 2 * c.gaussian;
    case FieldKind::LogTotal: return log_scale(4 * h2 - 2 * c.gaussian);
    case FieldKind::NormalLength: return c.area_element;
    case FieldKind::Coordinate: break;
  }
  return j.d[0][0][2];
}

constexpr std::pair<FieldKind, const char*> kFieldNames[] = {
    {FieldKind::Gaussian, "gaussian"},   {FieldKind::Mean, "mean"},
    {FieldKind::Willmore, "willmore"},   {FieldKind::LogWillmore, "log_willmore"},
    {FieldKind::Umbilic, "umbilic"},     {FieldKind::LogUmbilic, "log_umbilic"},
    {FieldKind::Total, "total"},         {FieldKind::LogTotal, "log_total"},
    {FieldKind::Coordinate, "coordinate"}, {FieldKind::NormalLength, "normal_length"},
};

}  // namespace

BSurface::BSurface(SpacePtr space_u0, SpacePtr space_u1, std::vector<Point3> net)
    : space0_(std::move(space_u0)), space1_(std::move(space_u1)), net_(std::move(net)) {
  if (!space0_ || !space1_) throw Error(ErrorCode::InvalidArgument, "surface needs two spaces");
  if (net_.size() != rows() * cols()) {
    std::ostringstream msg;
    msg << "control net has " << net_.size() << " points, spaces need " << rows() << "x" << cols();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

Point3 BSurface::eval(int j0, int j1, double u0, double u1) const {
  const auto b0 = space0_->b_all(j0, u0);
  const auto b1 = space1_->b_all(j1, u1);
  Point3 out{};
  for (std::size_t i0 = 0; i0 < rows(); ++i0) {
    Point3 row{};
    for (std::size_t i1 = 0; i1 < cols(); ++i1) row = row + b1[i1] * point(i0, i1);
    out = out + b0[i0] * row;
  }
  return out;
}

BCurve as_wide_curve(const BSurface& s, Direction d) {
  const bool along0 = d == Direction::U0;
  const std::size_t n = along0 ? s.rows() : s.cols(), other = along0 ? s.cols() : s.rows();
  DenseMatrix wide(n, 3 * other);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < other; ++k) {
      const Point3& p = along0 ? s.point(i, k) : s.point(k, i);
      for (std::size_t c = 0; c < 3; ++c) wide(i, 3 * k + c) = p[c];
    }
  return BCurve(s.space_ptr(d), std::move(wide));
}

BSurface from_wide_curve(const BCurve& c, const BSurface& like, Direction d) {
  const bool along0 = d == Direction::U0;
  const auto& p = c.control_points();
  const std::size_t n = p.rows(), other = p.cols() / 3;
  const std::size_t rows = along0 ? n : other, cols = along0 ? other : n;
  std::vector<Point3> net(rows * cols);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < other; ++k) {
      Point3& q = along0 ? net[i * cols + k] : net[k * cols + i];
      for (std::size_t m = 0; m < 3; ++m) q[m] = p(i, 3 * k + m);
    }
  const Direction fixed = along0 ? Direction::U1 : Direction::U0;
  return along0 ? BSurface(c.space_ptr(), like.space_ptr(fixed), std::move(net))
                : BSurface(like.space_ptr(fixed), c.space_ptr(), std::move(net));
}

BSurface elevate_order_surface(const BSurface& s, Direction d, SpacePtr target, const BuildOptions& options) {
  return from_wide_curve(elevate_to(as_wide_curve(s, d), std::move(target), options), s, d);
}

std::pair<BSurface, BSurface> subdivide_surface(const BSurface& s, Direction d, double gamma,
                                                const BuildOptions& options) {
  auto [left, right] = subdivide(as_wide_curve(s, d), gamma, options);
  return {from_wide_curve(left, s, d), from_wide_curve(right, s, d)};
}

BSurface represent_ordinary_surface(SpacePtr space_u0, SpacePtr space_u1, const SeparableSurfaceSpec& spec) {
  if (!space_u0 || !space_u1) throw Error(ErrorCode::InvalidArgument, "surface needs two spaces");
  const auto t0 = transformation_matrix(*space_u0);
  const auto t1 = transformation_matrix(*space_u1);
  const std::size_t n0 = t0.rows(), n1 = t1.rows();
  // Row vector lambda^T T: B-coordinates of a single ordinary combination.
  const auto to_b = [](const DenseMatrix& t, const std::vector<double>& lambda) {
    if (lambda.size() != t.rows()) {
      std::ostringstream msg;
      msg << "coefficient vector has " << lambda.size() << " entries, space has dimension " << t.rows();
      throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    std::vector<double> out(t.cols(), 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t j = 0; j < t.cols(); ++j) out[j] += lambda[i] * t(i, j);
    return out;
  };
  std::vector<Point3> net(n0 * n1, Point3{});
  for (std::size_t l = 0; l < 3; ++l)
    for (const auto& term : spec.coordinates[l]) {
      const auto f = to_b(t0, term.u0), g = to_b(t1, term.u1);
      for (std::size_t j0 = 0; j0 < n0; ++j0)
        for (std::size_t j1 = 0; j1 < n1; ++j1) net[j0 * n1 + j1][l] += f[j0] * g[j1];
    }
  return BSurface(std::move(space_u0), std::move(space_u1), std::move(net));
}

std::vector<SampledCurve> isoparametric_lines(const BSurface& s, Direction d, int line_count,
                                              int samples_per_line, int d_max) {
  if (line_count < 1 || samples_per_line < 2 || d_max < 0)
    throw Error(ErrorCode::InvalidArgument, "need at least one line, two samples and d_max >= 0");
  const Direction fixed = d == Direction::U0 ? Direction::U1 : Direction::U0;
  const ECSpace& fs = s.space(fixed);
  const BCurve wide = as_wide_curve(s, d);
  const std::size_t n = wide.control_points().rows(), other = wide.control_points().cols() / 3;
  std::vector<SampledCurve> lines;
  for (int k = 0; k < line_count; ++k) {
    const double v = line_count == 1 ? fs.alpha() : grid_value(fs, k, line_count);
    const auto w = fs.b_all(0, v);
    // Contract the fixed direction to get the line as an ordinary B-curve.
    DenseMatrix control(n, 3);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t m = 0; m < other; ++m)
        for (std::size_t c = 0; c < 3; ++c) control(i, c) += w[m] * wide.control_points()(i, 3 * m + c);
    lines.push_back(sample_curve(BCurve(s.space_ptr(d), std::move(control)), samples_per_line, d_max));
  }
  return lines;
}

std::optional<FieldKind> field_kind_from_string(std::string_view name) {
  for (const auto& [kind, text] : kFieldNames)
    if (name == text) return kind;
  return std::nullopt;
}

const char* to_string(FieldKind kind) noexcept {
  for (const auto& [k, text] : kFieldNames)
    if (k == kind) return text;
  return "unknown";
}

ScalarField curvature_field(const BSurface& s, int m0, int m1, FieldKind kind, unsigned workers) {
  check_grid(m0, m1);
  ScalarField field{m0, m1, kind, std::vector<double>(static_cast<std::size_t>(m0) * m1)};
  detail::parallel_for(field.values.size(), workers, [&](std::size_t idx) {
    const double u0 = grid_value(s.space(Direction::U0), static_cast<int>(idx / m1), m0);
    const double u1 = grid_value(s.space(Direction::U1), static_cast<int>(idx % m1), m1);
    field.values[idx] = field_value(kind, jet(s, u0, u1), u0, u1);
  });
  return field;
}

Point3 colormap(double t) {
  static constexpr Point3 anchors[] = {
      {0.0, 0.0, 0.5}, {0.0, 1.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double x = t * 4;
  const int k = std::min(3, static_cast<int>(x));
  const double w = x - k;
  return (1 - w) * anchors[k] + w * anchors[k + 1];
}

TriangleMesh tessellate(const BSurface& s, int m0, int m1, std::optional<FieldKind> field, unsigned workers) {
  check_grid(m0, m1);
  const std::size_t count = static_cast<std::size_t>(m0) * m1;
  TriangleMesh mesh;
  mesh.positions.resize(count);
  mesh.normals.resize(count);
  mesh.texcoords.resize(count);
  mesh.colors.assign(count, Point3{0.75, 0.75, 0.75});
  std::vector<double> values(field ? count : 0);

  detail::parallel_for(count, workers, [&](std::size_t idx) {
    const int i0 = static_cast<int>(idx / m1), i1 = static_cast<int>(idx % m1);
    const double u0 = grid_value(s.space(Direction::U0), i0, m0);
    const double u1 = grid_value(s.space(Direction::U1), i1, m1);
    const Jet j = jet(s, u0, u1);
    const Point3 n = cross(j.d[1][0], j.d[0][1]);
    const double len = norm(n);
    if (!(len > 1e-14)) degenerate(u0, u1);
    mesh.positions[idx] = j.d[0][0];
    mesh.normals[idx] = (1.0 / len) * n;
    mesh.texcoords[idx] = {static_cast<double>(i0) / (m0 - 1), static_cast<double>(i1) / (m1 - 1)};
    if (field) values[idx] = field_value(*field, j, u0, u1);
  });

  if (field) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double span = *hi - *lo;
    for (std::size_t i = 0; i < count; ++i) mesh.colors[i] = colormap(span > 0 ? (values[i] - *lo) / span : 0.0);
  }

  // Quad (i0, i1)-(i0+1, i1+1) split along its diagonal; counter-clockwise in
  // the (u0, u1) plane, hence consistent with s_u0 x s_u1.
  mesh.faces.reserve(2 * static_cast<std::size_t>(m0 - 1) * (m1 - 1));
  for (int i0 = 0; i0 + 1 < m0; ++i0)
    for (int i1 = 0; i1 + 1 < m1; ++i1) {
      const auto at = [m1](int a, int b) { return static_cast<std::uint32_t>(a * m1 + b); };
      mesh.faces.push_back({at(i0, i1), at(i0 + 1, i1), at(i0 + 1, i1 + 1)});
      mesh.faces.push_back({at(i0, i1), at(i0 + 1, i1 + 1), at(i0, i1 + 1)});
    }
  return mesh;
}

}  // namespace ecbasis
