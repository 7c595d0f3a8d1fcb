#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ecbasis/bcurve.hpp"

namespace ecbasis {

using Point3 = std::array<double, 3>;

enum class Direction { U0, U1 };

// Tensor-product B-surface. The control net is stored row-major:
// net[i0 * (n1 + 1) + i1] = p_{i0,i1}.
class BSurface {
 public:
  BSurface(SpacePtr space_u0, SpacePtr space_u1, std::vector<Point3> net);

  const ECSpace& space(Direction d) const noexcept { return d == Direction::U0 ? *space0_ : *space1_; }
  const SpacePtr& space_ptr(Direction d) const noexcept { return d == Direction::U0 ? space0_ : space1_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(space0_->dimension()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(space1_->dimension()); }
  const std::vector<Point3>& net() const noexcept { return net_; }
  const Point3& point(std::size_t i0, std::size_t i1) const { return net_[i0 * cols() + i1]; }

  // Partial derivative of order (j0, j1); throws OutOfDomain outside the patch.
  Point3 eval(int j0, int j1, double u0, double u1) const;

 private:
  SpacePtr space0_, space1_;
  std::vector<Point3> net_;
};

// Net as a curve along one direction: each control point packs a full row
// (or column) of 3D points, so curve algorithms act on the whole net at once.
BCurve as_wide_curve(const BSurface& s, Direction d);
BSurface from_wide_curve(const BCurve& c, const BSurface& like, Direction d);

BSurface elevate_order_surface(const BSurface& s, Direction d, SpacePtr target,
                               const BuildOptions& options = {});
std::pair<BSurface, BSurface> subdivide_surface(const BSurface& s, Direction d, double gamma,
                                                const BuildOptions& options = {});

// Coordinate l of the surface is sum_z f_z(u0) g_z(u1), where f_z and g_z are
// given by their coefficients in the ordinary bases of the two spaces.
struct SeparableTerm {
  std::vector<double> u0;
  std::vector<double> u1;
};
struct SeparableSurfaceSpec {
  std::array<std::vector<SeparableTerm>, 3> coordinates;
};

BSurface represent_ordinary_surface(SpacePtr space_u0, SpacePtr space_u1, const SeparableSurfaceSpec& spec);

// line_count lines with the other parameter uniformly spaced (endpoints
// included when line_count > 1); direction d is the free parameter.
std::vector<SampledCurve> isoparametric_lines(const BSurface& s, Direction d, int line_count,
                                              int samples_per_line, int d_max);

enum class FieldKind {
  Gaussian,
  Mean,
  Willmore,
  LogWillmore,
  Umbilic,
  LogUmbilic,
  Total,
  LogTotal,
  Coordinate,
  NormalLength,
};

std::optional<FieldKind> field_kind_from_string(std::string_view name);
const char* to_string(FieldKind kind) noexcept;

// Values over a uniform m0 x m1 grid, row-major in (u0, u1).
struct ScalarField {
  int m0 = 0;
  int m1 = 0;
  FieldKind kind = FieldKind::Gaussian;
  std::vector<double> values;
};

// Grid evaluation runs on `workers` threads (0: hardware concurrency); the
// result does not depend on the worker count.
ScalarField curvature_field(const BSurface& s, int m0, int m1, FieldKind kind, unsigned workers = 0);

struct TriangleMesh {
  std::vector<Point3> positions;
  std::vector<Point3> normals;
  std::vector<std::array<double, 2>> texcoords;
  std::vector<Point3> colors;
  std::vector<std::array<std::uint32_t, 3>> faces;
};

TriangleMesh tessellate(const BSurface& s, int m0, int m1, std::optional<FieldKind> field = std::nullopt,
                        unsigned workers = 0);

// Cold-to-hot palette for t in [0, 1].
Point3 colormap(double t);

}  // namespace ecbasis
