#include "ecbasis/ecbasis.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "ecbasis/bsurface.hpp"
#include "ecbasis/error.hpp"
#include "ecbasis/io.hpp"
#include "ecbasis/stats.hpp"

using namespace ecbasis;

struct ecb_space {
  SpacePtr ptr;
};
struct ecb_curve {
  BCurve curve;
};
struct ecb_surface {
  BSurface surface;
};
struct ecb_mesh {
  TriangleMesh mesh;
};

namespace {

static_assert(static_cast<int>(ErrorCode::ConfigParse) + 1 == ECB_CONFIG_PARSE,
              "status codes must mirror ErrorCode");

thread_local std::string last_error;

template <class F>
ecb_status guarded(F&& body) {
  try {
    body();
    return ECB_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<ecb_status>(static_cast<int>(e.code()) + 1);
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ECB_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ECB_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return ECB_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

CharacteristicPolynomial polynomial_of(const ecb_zero* zeros, std::size_t count) {
  require(zeros != nullptr || count == 0, "zeros is null");
  std::vector<CharacteristicZero> z;
  for (std::size_t k = 0; k < count; ++k) z.push_back({zeros[k].re, zeros[k].im, zeros[k].multiplicity});
  return CharacteristicPolynomial::make(z);
}

BuildOptions options_of(const ecb_build_options* o) {
  BuildOptions b;
  if (o) {
    b.check_conditioning = o->check_conditioning != 0;
    b.expected_digits = o->expected_digits;
  }
  return b;
}

Direction direction_of(ecb_direction d) {
  require(d == ECB_U0 || d == ECB_U1, "direction must be ECB_U0 or ECB_U1");
  return d == ECB_U0 ? Direction::U0 : Direction::U1;
}

FieldKind field_of(const char* name) {
  require(name != nullptr, "field name is null");
  auto kind = field_kind_from_string(name);
  if (!kind) throw Error(ErrorCode::InvalidArgument, std::string("unknown field '") + name + "'");
  return *kind;
}

DenseMatrix matrix_of(const double* data, std::size_t rows, std::size_t cols) {
  require(data != nullptr, "matrix data is null");
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
  return m;
}

void copy_out(const DenseMatrix& m, double* out) {
  require(out != nullptr, "output buffer is null");
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) *out++ = m(r, c);
}

}  // namespace

extern "C" {

const char* ecb_last_error(void) { return last_error.c_str(); }

const char* ecb_status_name(ecb_status status) {
  if (status == ECB_OK) return "Ok";
  if (status == ECB_INTERNAL) return "Internal";
  if (status > ECB_OK && status < ECB_INTERNAL) return to_string(static_cast<ErrorCode>(status - 1));
  return "Unknown";
}

ecb_status ecb_space_create(const ecb_zero* zeros, size_t count, double alpha, double beta,
                            const ecb_build_options* options, ecb_space** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new ecb_space{build_space(polynomial_of(zeros, count), alpha, beta, options_of(options))};
  });
}

void ecb_space_free(ecb_space* space) { delete space; }

int ecb_space_dimension(const ecb_space* space) { return space ? space->ptr->dimension() : 0; }

ecb_status ecb_space_interval(const ecb_space* space, double* alpha, double* beta) {
  return guarded([&] {
    require(space && alpha && beta, "null argument");
    *alpha = space->ptr->alpha();
    *beta = space->ptr->beta();
  });
}

int ecb_space_reflection_invariant(const ecb_space* space) {
  return space && space->ptr->reflection_invariant() ? 1 : 0;
}

ecb_status ecb_space_eval_basis(const ecb_space* space, int order, double u, double* out) {
  return guarded([&] {
    require(space && out, "null argument");
    space->ptr->b_all(order, u, std::span<double>(out, static_cast<std::size_t>(space->ptr->dimension())));
  });
}

ecb_status ecb_space_eval_ordinary(const ecb_space* space, int order, double u, double* out) {
  return guarded([&] {
    require(space && out, "null argument");
    require(order >= 0, "negative differentiation order");
    const auto& f = space->ptr->ordinary();
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k].derivative(order, u);
  });
}

ecb_status ecb_space_ordinary_function(const ecb_space* space, int k, ecb_ordinary_function* out) {
  return guarded([&] {
    require(space && out, "null argument");
    require(k >= 0 && k < space->ptr->dimension(), "function index out of range");
    const auto& f = space->ptr->ordinary()[static_cast<std::size_t>(k)];
    *out = {f.power, f.exp_rate, f.frequency, f.phase == Phase::Sin ? 1 : 0};
  });
}

ecb_status ecb_space_ordinary_name(const ecb_space* space, int k, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] {
    require(space != nullptr, "space is null");
    require(k >= 0 && k < space->ptr->dimension(), "function index out of range");
    const std::string name = space->ptr->ordinary()[static_cast<std::size_t>(k)].latex();
    if (needed) *needed = name.size() + 1;
    if (buffer && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, name.size());
      std::memcpy(buffer, name.data(), n);
      buffer[n] = '\0';
    }
  });
}

size_t ecb_space_report_count(const ecb_space* space) { return space ? space->ptr->condition_reports().size() : 0; }

ecb_status ecb_space_report(const ecb_space* space, size_t index, ecb_condition_report* out) {
  return guarded([&] {
    require(space && out, "null argument");
    const auto& reports = space->ptr->condition_reports();
    require(index < reports.size(), "report index out of range");
    const auto& r = reports[index];
    *out = {r.condition_number, r.estimated_correct_digits, r.stage_label.c_str()};
  });
}

ecb_status ecb_space_transformation(const ecb_space* space, double* out, int64_t* flops) {
  return guarded([&] {
    require(space != nullptr, "space is null");
    std::int64_t count = 0;
    copy_out(transformation_matrix(*space->ptr, &count), out);
    if (flops) *flops = count;
  });
}

int64_t ecb_transformation_flop_count(int n) { return transformation_flop_count(n); }

double ecb_kappa_lu(int n, int delta) { return kappa_lu(n, delta); }

ecb_status ecb_critical_length(const ecb_zero* zeros, size_t count, double alpha, double search_cap, int for_design,
                               double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    CriticalLengthOptions o;
    if (search_cap > 0) o.search_cap = search_cap;
    const auto p = polynomial_of(zeros, count);
    *out = for_design ? critical_length_for_design(p, alpha, o) : critical_length(p, alpha, o);
  });
}

ecb_status ecb_curve_create(const ecb_space* space, const double* points, size_t dim, ecb_curve** out) {
  return guarded([&] {
    require(space && out, "null argument");
    require(dim >= 1, "point dimension must be positive");
    *out = new ecb_curve{BCurve(space->ptr, matrix_of(points, static_cast<std::size_t>(space->ptr->dimension()), dim))};
  });
}

ecb_status ecb_curve_from_ordinary(const ecb_space* space, const double* coefficients, size_t dim, ecb_curve** out) {
  return guarded([&] {
    require(space && out, "null argument");
    require(dim >= 1, "point dimension must be positive");
    const auto lambda = matrix_of(coefficients, static_cast<std::size_t>(space->ptr->dimension()), dim);
    *out = new ecb_curve{represent_ordinary_curve(space->ptr, lambda)};
  });
}

void ecb_curve_free(ecb_curve* curve) { delete curve; }

size_t ecb_curve_point_count(const ecb_curve* curve) { return curve ? curve->curve.control_points().rows() : 0; }

size_t ecb_curve_point_dimension(const ecb_curve* curve) { return curve ? curve->curve.point_dimension() : 0; }

ecb_status ecb_curve_control_points(const ecb_curve* curve, double* out) {
  return guarded([&] {
    require(curve != nullptr, "curve is null");
    copy_out(curve->curve.control_points(), out);
  });
}

ecb_status ecb_curve_space(const ecb_curve* curve, ecb_space** out) {
  return guarded([&] {
    require(curve && out, "null argument");
    *out = new ecb_space{curve->curve.space_ptr()};
  });
}

ecb_status ecb_curve_eval(const ecb_curve* curve, int order, double u, double* out) {
  return guarded([&] {
    require(curve && out, "null argument");
    curve->curve.eval(order, u, std::span<double>(out, curve->curve.point_dimension()));
  });
}

ecb_status ecb_curve_subdivide(const ecb_curve* curve, double gamma, const ecb_build_options* options,
                               ecb_curve** left, ecb_curve** right) {
  return guarded([&] {
    require(curve && left && right, "null argument");
    auto [l, r] = subdivide(curve->curve, gamma, options_of(options));
    auto* a = new ecb_curve{std::move(l)};
    *right = new ecb_curve{std::move(r)};
    *left = a;
  });
}

ecb_status ecb_curve_elevate(const ecb_curve* curve, const ecb_space* target, ecb_curve** out) {
  return guarded([&] {
    require(curve && target && out, "null argument");
    *out = new ecb_curve{elevate_to(curve->curve, target->ptr)};
  });
}

ecb_status ecb_surface_create(const ecb_space* u0, const ecb_space* u1, const double* net, ecb_surface** out) {
  return guarded([&] {
    require(u0 && u1 && net && out, "null argument");
    const std::size_t count = static_cast<std::size_t>(u0->ptr->dimension() * u1->ptr->dimension());
    std::vector<Point3> points(count);
    for (std::size_t i = 0; i < count; ++i) points[i] = {net[3 * i], net[3 * i + 1], net[3 * i + 2]};
    *out = new ecb_surface{BSurface(u0->ptr, u1->ptr, std::move(points))};
  });
}

ecb_status ecb_surface_from_separable(const ecb_space* u0, const ecb_space* u1, const size_t term_counts[3],
                                      const double* u0_coefficients, const double* u1_coefficients,
                                      ecb_surface** out) {
  return guarded([&] {
    require(u0 && u1 && term_counts && out, "null argument");
    const auto d0 = static_cast<std::size_t>(u0->ptr->dimension()), d1 = static_cast<std::size_t>(u1->ptr->dimension());
    SeparableSurfaceSpec spec;
    std::size_t term = 0;
    for (std::size_t l = 0; l < 3; ++l)
      for (std::size_t z = 0; z < term_counts[l]; ++z, ++term) {
        require(u0_coefficients && u1_coefficients, "coefficients are null");
        spec.coordinates[l].push_back({std::vector<double>(u0_coefficients + term * d0, u0_coefficients + (term + 1) * d0),
                                       std::vector<double>(u1_coefficients + term * d1, u1_coefficients + (term + 1) * d1)});
      }
    *out = new ecb_surface{represent_ordinary_surface(u0->ptr, u1->ptr, spec)};
  });
}

void ecb_surface_free(ecb_surface* surface) { delete surface; }

ecb_status ecb_surface_net_size(const ecb_surface* surface, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(surface && rows && cols, "null argument");
    *rows = surface->surface.rows();
    *cols = surface->surface.cols();
  });
}

ecb_status ecb_surface_net(const ecb_surface* surface, double* out) {
  return guarded([&] {
    require(surface && out, "null argument");
    for (const auto& p : surface->surface.net())
      for (double v : p) *out++ = v;
  });
}

ecb_status ecb_surface_space(const ecb_surface* surface, ecb_direction direction, ecb_space** out) {
  return guarded([&] {
    require(surface && out, "null argument");
    *out = new ecb_space{surface->surface.space_ptr(direction_of(direction))};
  });
}

ecb_status ecb_surface_eval(const ecb_surface* surface, int j0, int j1, double u0, double u1, double* out) {
  return guarded([&] {
    require(surface && out, "null argument");
    const auto p = surface->surface.eval(j0, j1, u0, u1);
    std::copy(p.begin(), p.end(), out);
  });
}

ecb_status ecb_surface_elevate(const ecb_surface* surface, ecb_direction direction, const ecb_space* target,
                               ecb_surface** out) {
  return guarded([&] {
    require(surface && target && out, "null argument");
    *out = new ecb_surface{elevate_order_surface(surface->surface, direction_of(direction), target->ptr)};
  });
}

ecb_status ecb_surface_subdivide(const ecb_surface* surface, ecb_direction direction, double gamma,
                                 const ecb_build_options* options, ecb_surface** first, ecb_surface** second) {
  return guarded([&] {
    require(surface && first && second, "null argument");
    auto [a, b] = subdivide_surface(surface->surface, direction_of(direction), gamma, options_of(options));
    auto* lo = new ecb_surface{std::move(a)};
    *second = new ecb_surface{std::move(b)};
    *first = lo;
  });
}

ecb_status ecb_surface_field(const ecb_surface* surface, int m0, int m1, const char* kind, unsigned workers,
                             double* out) {
  return guarded([&] {
    require(surface && out, "null argument");
    const auto f = curvature_field(surface->surface, m0, m1, field_of(kind), workers);
    std::copy(f.values.begin(), f.values.end(), out);
  });
}

ecb_status ecb_surface_isolines(const ecb_surface* surface, ecb_direction direction, int lines, int samples,
                                int d_max, double* params, double* values) {
  return guarded([&] {
    require(surface && params && values, "null argument");
    for (const auto& line : isoparametric_lines(surface->surface, direction_of(direction), lines, samples, d_max)) {
      for (std::size_t i = 0; i < line.parameters.size(); ++i) {
        *params++ = line.parameters[i];
        const auto& d = line.derivatives[i];
        for (std::size_t r = 0; r < d.rows(); ++r)
          for (std::size_t c = 0; c < 3; ++c) *values++ = d(r, c);
      }
    }
  });
}

ecb_status ecb_surface_tessellate(const ecb_surface* surface, int m0, int m1, const char* field, unsigned workers,
                                  ecb_mesh** out) {
  return guarded([&] {
    require(surface && out, "null argument");
    std::optional<FieldKind> kind;
    if (field) kind = field_of(field);
    *out = new ecb_mesh{tessellate(surface->surface, m0, m1, kind, workers)};
  });
}

void ecb_mesh_free(ecb_mesh* mesh) { delete mesh; }

ecb_status ecb_mesh_counts(const ecb_mesh* mesh, size_t* vertices, size_t* faces) {
  return guarded([&] {
    require(mesh && vertices && faces, "null argument");
    *vertices = mesh->mesh.positions.size();
    *faces = mesh->mesh.faces.size();
  });
}

ecb_status ecb_mesh_write_obj(const ecb_mesh* mesh, const char* path) {
  return guarded([&] {
    require(mesh && path, "null argument");
    write_obj(path, mesh->mesh);
  });
}

ecb_status ecb_write_csv(const char* path, const char* const* header, size_t columns, const double* rows,
                         size_t row_count) {
  return guarded([&] {
    require(path != nullptr, "path is null");
    std::vector<std::string> names;
    if (header)
      for (std::size_t c = 0; c < columns; ++c) names.emplace_back(header[c] ? header[c] : "");
    write_csv(path, names, row_count ? matrix_of(rows, row_count, columns) : DenseMatrix(0, columns));
  });
}

ecb_status ecb_write_svg(const char* path, const char* title, size_t line_count, const size_t* lengths,
                         const double* xs, const double* ys, const char* const* labels) {
  return guarded([&] {
    require(path != nullptr, "path is null");
    require(line_count == 0 || (lengths && xs && ys), "null polyline data");
    std::vector<Polyline> lines;
    std::size_t offset = 0;
    for (std::size_t k = 0; k < line_count; ++k) {
      Polyline l;
      if (labels && labels[k]) l.label = labels[k];
      l.x.assign(xs + offset, xs + offset + lengths[k]);
      l.y.assign(ys + offset, ys + offset + lengths[k]);
      offset += lengths[k];
      lines.push_back(std::move(l));
    }
    write_svg(path, title ? title : "", lines);
  });
}

ecb_status ecb_confidence_interval(const double* samples, size_t count, double significance, ecb_interval* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(samples != nullptr || count == 0, "samples is null");
    const auto ci = confidence_interval(std::span<const double>(samples, count), significance);
    *out = {ci.lower, ci.upper, ci.mean, ci.stddev, ci.count};
  });
}

}  // extern "C"
