#pragma once

// Kummer shapes as data: generating curves y^2 = RHS(z) and their surfaces of
// revolution about the z axis.
//
// plus : y^2 = ((c+z)/n)^m ((c-z)/m)^n,  |z| < c, bounded.
// minus: y^2 = ((z+c)/n)^m ((z-c)/m)^n,  |z| > c, unbounded; the lower sheet
//        exists only when n + m is even.

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "resdp/casimir.hpp"
#include "resdp/io.hpp"

namespace resdp {

/// Ordered (y, z) pairs along one sheet of a generating curve.
struct Polyline {
  std::vector<Eigen::Vector2d> points;
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  /// 0-based vertex indices; exports are 1-based.
  std::vector<std::array<std::size_t, 3>> faces;
  /// Apex vertices placed at the singular poles (0, 0, +-c).
  std::vector<std::size_t> pole_caps;

  bool empty() const { return vertices.empty(); }
};

struct ShapeOptions {
  /// Pole/branch margin relative to c.
  double delta = 1e-6;
  /// Truncation height of unbounded sheets; 0 means 3c.
  double z_max = 0.0;
};

inline bool has_lower_sheet(const Resonance& res) {
  return res.sign == FormSign::minus && (res.n + res.m) % 2 == 0;
}

/// Right-hand side of the generating-curve equation at height z.
inline double shape_rhs(const Resonance& res, double c, double z) {
  if (res.sign == FormSign::plus) return ipow((c + z) / res.n, res.m) * ipow((c - z) / res.m, res.n);
  return ipow((z + c) / res.n, res.m) * ipow((z - c) / res.m, res.n);
}

/// Phi (plus) or Psi (minus) at (p, c).
inline double shape_residual(const Resonance& res, double c, const Vec3& p) {
  return res.sign == FormSign::plus ? phi(p[0], p[1], p[2], c, res.n, res.m) : psi(p[0], p[1], p[2], c, res.n, res.m);
}

namespace detail {

inline double shape_radius(const Resonance& res, double c, double z) { return std::sqrt(std::max(0.0, shape_rhs(res, c, z))); }

inline void check_shape_params(double c, const ShapeOptions& opt) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::BadParams, "shape parameter c must be positive");
  if (!(opt.delta > 0.0 && opt.delta < 0.5)) throw Error(ErrorKind::BadParams, "delta must lie in (0, 0.5)");
}

inline double z_max_of(double c, const ShapeOptions& opt) {
  const double z_max = opt.z_max > 0.0 ? opt.z_max : 3.0 * c;
  if (!(z_max > c * (1.0 + opt.delta))) throw Error(ErrorKind::BadParams, "z_max must exceed c (1 + delta)");
  return z_max;
}

// Point of [near, far] where the radius reaches `target`, assuming the radius
// grows monotonically from `near` toward `far`. Returns `near` if it already
// clears the target.
inline double clear_axis(const Resonance& res, double c, double near, double far, double target) {
  if (shape_radius(res, c, near) >= target) return near;
  if (shape_radius(res, c, far) < target) throw Error(ErrorKind::BadParams, "shape too thin to mesh away from the axis");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (near + far);
    (shape_radius(res, c, mid) < target ? near : far) = mid;
  }
  return far;
}

// Heights of one sheet. Bounded: cosine spacing over [lo, hi]. Unbounded:
// quarter-cosine spacing from the tip (dense) to the far end.
inline std::vector<double> sheet_heights(bool bounded, double from, double to, std::size_t count) {
  std::vector<double> z(count);
  const double span = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / span;
    z[i] = bounded ? 0.5 * (from + to) - 0.5 * (to - from) * std::cos(std::numbers::pi * s)
                   : from + (to - from) * (1.0 - std::cos(0.5 * std::numbers::pi * s));
  }
  z.front() = from;
  z.back() = to;
  return z;
}

struct SheetRange {
  bool bounded;
  double from;
  double to;
};

// Sheets of the shape with their z ranges; `clear` pushes pole-side ends
// inward until the radius is at least 1e-8 c.
inline std::vector<SheetRange> sheet_ranges(const Resonance& res, double c, const ShapeOptions& opt, bool clear) {
  const double target = 1e-8 * c;
  std::vector<SheetRange> out;
  if (res.sign == FormSign::plus) {
    double lo = -c * (1.0 - opt.delta), hi = c * (1.0 - opt.delta);
    if (clear) {
      // The profile peaks at z = c (m - n) / (m + n).
      const double peak = c * (res.m - res.n) / static_cast<double>(res.m + res.n);
      lo = clear_axis(res, c, lo, peak, target);
      hi = clear_axis(res, c, hi, peak, target);
    }
    out.push_back({true, lo, hi});
    return out;
  }
  const double z_max = z_max_of(c, opt);
  double tip = c * (1.0 + opt.delta);
  if (clear) tip = clear_axis(res, c, tip, z_max, target);
  out.push_back({false, tip, z_max});
  if (has_lower_sheet(res)) {
    double low_tip = -c * (1.0 + opt.delta);
    if (clear) low_tip = clear_axis(res, c, low_tip, -z_max, target);
    out.push_back({false, low_tip, -z_max});
  }
  return out;
}

}  // namespace detail

/// One Polyline per sheet: the bounded shape, or the upper sheet followed by
/// the lower sheet when it exists.
inline std::vector<Polyline> generating_curve(const Resonance& res, double c, std::size_t samples,
                                              const ShapeOptions& opt = {}) {
  detail::check_shape_params(c, opt);
  if (samples < 2) throw Error(ErrorKind::BadParams, "need at least 2 samples");
  std::vector<Polyline> out;
  for (const auto& sheet : detail::sheet_ranges(res, c, opt, false)) {
    Polyline line;
    for (double z : detail::sheet_heights(sheet.bounded, sheet.from, sheet.to, samples))
      line.points.emplace_back(detail::shape_radius(res, c, z), z);
    out.push_back(std::move(line));
  }
  return out;
}

/// Surfaces of revolution, one mesh per sheet. Pole-side ends close with a fan
/// to an apex at (0, 0, +-c); ring vertices keep a radius of at least 1e-8 c.
inline std::vector<TriangleMesh> surface_mesh(const Resonance& res, double c, std::size_t slices, std::size_t rings,
                                              const ShapeOptions& opt = {}) {
  detail::check_shape_params(c, opt);
  if (slices < 3 || rings < 2) throw Error(ErrorKind::BadParams, "need slices >= 3 and rings >= 2");
  std::vector<TriangleMesh> out;
  for (const auto& sheet : detail::sheet_ranges(res, c, opt, true)) {
    TriangleMesh mesh;
    const auto heights = detail::sheet_heights(sheet.bounded, sheet.from, sheet.to, rings);
    for (double z : heights) {
      const double r = detail::shape_radius(res, c, z);
      for (std::size_t k = 0; k < slices; ++k) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(slices);
        mesh.vertices.emplace_back(r * std::cos(th), r * std::sin(th), z);
      }
    }
    auto at = [slices](std::size_t ring, std::size_t k) { return ring * slices + k % slices; };
    for (std::size_t j = 0; j + 1 < rings; ++j)
      for (std::size_t k = 0; k < slices; ++k) {
        mesh.faces.push_back({at(j, k), at(j, k + 1), at(j + 1, k + 1)});
        mesh.faces.push_back({at(j, k), at(j + 1, k + 1), at(j + 1, k)});
      }
    auto cap = [&](std::size_t ring, double z_pole, bool flip) {
      const std::size_t apex = mesh.vertices.size();
      mesh.vertices.emplace_back(0.0, 0.0, z_pole);
      mesh.pole_caps.push_back(apex);
      for (std::size_t k = 0; k < slices; ++k) {
        if (flip)
          mesh.faces.push_back({apex, at(ring, k + 1), at(ring, k)});
        else
          mesh.faces.push_back({apex, at(ring, k), at(ring, k + 1)});
      }
    };
    const bool descending = sheet.to < sheet.from;
    cap(0, std::copysign(c, sheet.from), !descending);
    if (sheet.bounded) cap(rings - 1, c, false);
    out.push_back(std::move(mesh));
  }
  return out;
}

/// Concatenation of several meshes with face indices offset.
inline TriangleMesh merge_meshes(const std::vector<TriangleMesh>& meshes) {
  TriangleMesh out;
  for (const auto& m : meshes) {
    const std::size_t offset = out.vertices.size();
    out.vertices.insert(out.vertices.end(), m.vertices.begin(), m.vertices.end());
    for (const auto& f : m.faces) out.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
    for (auto p : m.pole_caps) out.pole_caps.push_back(p + offset);
  }
  return out;
}

// Export. CSV: header line, comma separated, %.17g, LF. OBJ: "v x y z" lines
// then "f i j k" with 1-based indices, LF, no normals.


inline std::string to_csv(const std::vector<Polyline>& sheets) {
  std::string s = "y,z\n";
  for (const auto& line : sheets)
    for (const auto& p : line.points) s += format_g17(p[0]) + "," + format_g17(p[1]) + "\n";
  return s;
}

inline std::string to_csv(const TriangleMesh& mesh) {
  std::string s = "x,y,z\n";
  for (const auto& v : mesh.vertices) s += format_g17(v[0]) + "," + format_g17(v[1]) + "," + format_g17(v[2]) + "\n";
  return s;
}

inline std::string to_obj(const TriangleMesh& mesh) {
  std::string s;
  for (const auto& v : mesh.vertices) s += "v " + format_g17(v[0]) + " " + format_g17(v[1]) + " " + format_g17(v[2]) + "\n";
  for (const auto& f : mesh.faces)
    s += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " + std::to_string(f[2] + 1) + "\n";
  return s;
}


inline void export_csv(const std::vector<Polyline>& sheets, const std::string& path) { write_text(path, to_csv(sheets)); }
inline void export_csv(const TriangleMesh& mesh, const std::string& path) { write_text(path, to_csv(mesh)); }
inline void export_obj(const TriangleMesh& mesh, const std::string& path) { write_text(path, to_obj(mesh)); }
inline void export_obj(const std::vector<TriangleMesh>& sheets, const std::string& path) {
  write_text(path, to_obj(merge_meshes(sheets)));
}

inline TriangleMesh read_obj(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  TriangleMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      std::string x, y, z;
      ss >> x >> y >> z;
      mesh.vertices.emplace_back(std::stod(x), std::stod(y), std::stod(z));
    } else if (tag == "f") {
      std::size_t i, j, k;
      ss >> i >> j >> k;
      mesh.faces.push_back({i - 1, j - 1, k - 1});
    }
  }
  return mesh;
}

}  // namespace resdp
