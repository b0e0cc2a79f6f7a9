#include "polytope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace wassest::detail {
namespace {

// Relative tolerance for "on the cutting plane", scaled by |a| and box extent.
constexpr double kRelTol = 1e-12;

double box_scale(const Hyperrectangle& box) {
  double s = 1.0;
  for (std::size_t d = 0; d < box.dimension(); ++d) {
    s = std::max({s, std::abs(box.lo[d]), std::abs(box.hi[d])});
  }
  return s;
}

// ---- l = 1 ---------------------------------------------------------------

ClippedIntegral integrate_1d(const Hyperrectangle& box, const std::vector<HalfSpace>& cuts,
                             double c) {
  double lo = box.lo[0];
  double hi = box.hi[0];
  for (const auto& h : cuts) {
    const double a = h.normal[0];
    if (a > 0.0) {
      hi = std::min(hi, h.offset / a);
    } else if (a < 0.0) {
      lo = std::max(lo, h.offset / a);
    } else if (h.offset < 0.0) {
      return {};
    }
    if (!(lo < hi)) return {};
  }
  const double u = hi - c;
  const double v = lo - c;
  return {hi - lo, (u * u * u - v * v * v) / 3.0};
}

// ---- l = 2 ---------------------------------------------------------------

using P2 = std::array<double, 2>;

std::vector<P2> clip_polygon(const std::vector<P2>& poly, const HalfSpace& h, double tol) {
  const std::size_t m = poly.size();
  std::vector<double> s(m);
  bool any_in = false;
  bool any_out = false;
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = h.normal[0] * poly[i][0] + h.normal[1] * poly[i][1] - h.offset;
    (s[i] <= tol ? any_in : any_out) = true;
  }
  if (!any_out) return poly;
  if (!any_in) return {};
  std::vector<P2> out;
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = (i + 1) % m;
    const bool in_i = s[i] <= tol;
    const bool in_k = s[k] <= tol;
    if (in_i) out.push_back(poly[i]);
    if (in_i != in_k) {
      const double t = std::clamp(s[i] / (s[i] - s[k]), 0.0, 1.0);
      out.push_back({poly[i][0] + t * (poly[k][0] - poly[i][0]),
                     poly[i][1] + t * (poly[k][1] - poly[i][1])});
    }
  }
  if (out.size() < 3) return {};
  return out;
}

ClippedIntegral integrate_2d(const Hyperrectangle& box, const std::vector<HalfSpace>& cuts,
                             PointView c) {
  std::vector<P2> poly = {{box.lo[0], box.lo[1]},
                          {box.hi[0], box.lo[1]},
                          {box.hi[0], box.hi[1]},
                          {box.lo[0], box.hi[1]}};
  const double scale = box_scale(box);
  for (const auto& h : cuts) {
    const double tol = kRelTol * scale * std::hypot(h.normal[0], h.normal[1]);
    poly = clip_polygon(poly, h, tol);
    if (poly.empty()) return {};
  }
  auto q = [&](double x, double y) {
    const double dx = x - c[0];
    const double dy = y - c[1];
    return dx * dx + dy * dy;
  };
  // Edge-midpoint rule is exact for quadratics on a triangle.
  ClippedIntegral r;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const P2& a = poly[0];
    const P2& b = poly[i];
    const P2& d = poly[i + 1];
    const double area =
        0.5 * std::abs((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]));
    const double mid = q(0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])) +
                       q(0.5 * (b[0] + d[0]), 0.5 * (b[1] + d[1])) +
                       q(0.5 * (d[0] + a[0]), 0.5 * (d[1] + a[1]));
    r.volume += area;
    r.quadratic += area * mid / 3.0;
  }
  return r;
}

// ---- l = 3 ---------------------------------------------------------------

using P3 = std::array<double, 3>;
using Face = std::vector<P3>;

P3 lerp(const P3& a, const P3& b, double t) {
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

double dot3(const P3& a, const P3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

P3 sub3(const P3& a, const P3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

P3 cross3(const P3& a, const P3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::vector<Face> box_faces(const Hyperrectangle& box) {
  const double x0 = box.lo[0], x1 = box.hi[0];
  const double y0 = box.lo[1], y1 = box.hi[1];
  const double z0 = box.lo[2], z1 = box.hi[2];
  return {
      {{x0, y0, z0}, {x0, y1, z0}, {x0, y1, z1}, {x0, y0, z1}},
      {{x1, y0, z0}, {x1, y1, z0}, {x1, y1, z1}, {x1, y0, z1}},
      {{x0, y0, z0}, {x1, y0, z0}, {x1, y0, z1}, {x0, y0, z1}},
      {{x0, y1, z0}, {x1, y1, z0}, {x1, y1, z1}, {x0, y1, z1}},
      {{x0, y0, z0}, {x1, y0, z0}, {x1, y1, z0}, {x0, y1, z0}},
      {{x0, y0, z1}, {x1, y0, z1}, {x1, y1, z1}, {x0, y1, z1}},
  };
}

std::vector<Face> clip_polyhedron(const std::vector<Face>& faces, const HalfSpace& h, double tol,
                                  double merge_tol) {
  const P3 a = {h.normal[0], h.normal[1], h.normal[2]};
  bool any_in = false;
  bool any_out = false;
  for (const auto& f : faces) {
    for (const auto& p : f) (dot3(a, p) - h.offset <= tol ? any_in : any_out) = true;
  }
  if (!any_out) return faces;
  if (!any_in) return {};

  std::vector<Face> out;
  std::vector<P3> cap;
  for (const auto& f : faces) {
    const std::size_t m = f.size();
    std::vector<double> s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = dot3(a, f[i]) - h.offset;
    Face g;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t k = (i + 1) % m;
      const bool in_i = s[i] <= tol;
      const bool in_k = s[k] <= tol;
      if (in_i) {
        g.push_back(f[i]);
        if (std::abs(s[i]) <= tol) cap.push_back(f[i]);
      }
      if (in_i != in_k) {
        const double t = std::clamp(s[i] / (s[i] - s[k]), 0.0, 1.0);
        g.push_back(lerp(f[i], f[k], t));
        cap.push_back(g.back());
      }
    }
    if (g.size() >= 3) out.push_back(std::move(g));
  }

  // The cap polygon lies on the cutting plane; order its distinct points by angle.
  std::vector<P3> uniq;
  for (const auto& p : cap) {
    const bool dup = std::any_of(uniq.begin(), uniq.end(), [&](const P3& u) {
      return std::abs(u[0] - p[0]) <= merge_tol && std::abs(u[1] - p[1]) <= merge_tol &&
             std::abs(u[2] - p[2]) <= merge_tol;
    });
    if (!dup) uniq.push_back(p);
  }
  if (uniq.size() >= 3) {
    P3 centroid{0.0, 0.0, 0.0};
    for (const auto& p : uniq) {
      for (int d = 0; d < 3; ++d) centroid[d] += p[d] / static_cast<double>(uniq.size());
    }
    const P3 helper = std::abs(a[0]) < 0.9 * std::sqrt(dot3(a, a)) ? P3{1, 0, 0} : P3{0, 1, 0};
    P3 u = cross3(a, helper);
    const P3 v = cross3(a, u);
    std::vector<std::pair<double, P3>> ordered;
    ordered.reserve(uniq.size());
    for (const auto& p : uniq) {
      const P3 r = sub3(p, centroid);
      ordered.emplace_back(std::atan2(dot3(r, v), dot3(r, u)), p);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    Face capf;
    for (auto& [angle, p] : ordered) capf.push_back(p);
    out.push_back(std::move(capf));
  }
  if (out.size() < 4) return {};
  return out;
}

ClippedIntegral integrate_3d(const Hyperrectangle& box, const std::vector<HalfSpace>& cuts,
                             PointView c) {
  std::vector<Face> faces = box_faces(box);
  const double scale = box_scale(box);
  for (const auto& h : cuts) {
    const double an = std::sqrt(h.normal[0] * h.normal[0] + h.normal[1] * h.normal[1] +
                                h.normal[2] * h.normal[2]);
    faces = clip_polyhedron(faces, h, kRelTol * scale * an, 1e-13 * scale);
    if (faces.empty()) return {};
  }
  P3 apex{0.0, 0.0, 0.0};
  std::size_t count = 0;
  for (const auto& f : faces) {
    for (const auto& p : f) {
      for (int d = 0; d < 3; ++d) apex[d] += p[d];
      ++count;
    }
  }
  for (int d = 0; d < 3; ++d) apex[d] /= static_cast<double>(count);

  auto q = [&](const P3& p) {
    const double dx = p[0] - c[0];
    const double dy = p[1] - c[1];
    const double dz = p[2] - c[2];
    return dx * dx + dy * dy + dz * dz;
  };
  auto mid = [](const P3& x, const P3& y) {
    return P3{0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1]), 0.5 * (x[2] + y[2])};
  };
  // Quadratic Lagrange rule on a tetrahedron: vertices weigh -1/20, edge
  // midpoints 1/5; exact for polynomials of degree 2.
  ClippedIntegral r;
  for (const auto& f : faces) {
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      const std::array<P3, 4> t = {apex, f[0], f[i], f[i + 1]};
      const double vol =
          std::abs(dot3(sub3(t[1], t[0]), cross3(sub3(t[2], t[0]), sub3(t[3], t[0])))) / 6.0;
      if (vol == 0.0) continue;
      double verts = 0.0;
      for (const auto& p : t) verts += q(p);
      double mids = 0.0;
      for (int x = 0; x < 4; ++x) {
        for (int y = x + 1; y < 4; ++y) mids += q(mid(t[x], t[y]));
      }
      r.volume += vol;
      r.quadratic += vol * (-verts / 20.0 + mids / 5.0);
    }
  }
  return r;
}

}  // namespace

ClippedIntegral clip_and_integrate(const Hyperrectangle& box, const std::vector<HalfSpace>& cuts,
                                   PointView center) {
  switch (box.dimension()) {
    case 1:
      return integrate_1d(box, cuts, center[0]);
    case 2:
      return integrate_2d(box, cuts, center);
    case 3:
      return integrate_3d(box, cuts, center);
    default: {
      std::ostringstream msg;
      msg << "exact cell volumes support dimension <= 3, got " << box.dimension();
      throw UnsupportedDimension(msg.str());
    }
  }
}

}  // namespace wassest::detail
