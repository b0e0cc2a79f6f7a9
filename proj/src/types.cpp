#include "wassest/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wassest {

double dot(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += a[d] * b[d];
  return s;
}

double squared_distance(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double t = a[d] - b[d];
    s += t * t;
  }
  return s;
}

double squared_norm(PointView a) { return dot(a, a); }

double norm(PointView a) { return std::sqrt(squared_norm(a)); }

Hyperrectangle::Hyperrectangle(Point lo_, Point hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size() || lo.empty()) {
    throw InvalidInput("hyperrectangle: lo and hi must be non-empty and of equal length");
  }
  for (std::size_t d = 0; d < lo.size(); ++d) {
    if (!std::isfinite(lo[d]) || !std::isfinite(hi[d]) || !(lo[d] < hi[d])) {
      std::ostringstream msg;
      msg << "hyperrectangle: dimension " << d << " has non-positive width [" << lo[d] << ", "
          << hi[d] << "]";
      throw InvalidInput(msg.str());
    }
  }
}

double Hyperrectangle::min_width() const {
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < lo.size(); ++d) w = std::min(w, width(d));
  return w;
}

double Hyperrectangle::volume() const {
  double v = 1.0;
  for (std::size_t d = 0; d < lo.size(); ++d) v *= width(d);
  return v;
}

bool Hyperrectangle::contains(PointView x) const {
  for (std::size_t d = 0; d < lo.size(); ++d) {
    if (x[d] < lo[d] || x[d] > hi[d]) return false;
  }
  return true;
}

std::vector<Point> Hyperrectangle::corners() const {
  const std::size_t l = dimension();
  std::vector<Point> out;
  out.reserve(std::size_t{1} << l);
  for (std::size_t mask = 0; mask < (std::size_t{1} << l); ++mask) {
    Point c(l);
    for (std::size_t d = 0; d < l; ++d) c[d] = (mask >> d) & 1U ? hi[d] : lo[d];
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// Interiors intersect iff every coordinate interval overlaps with positive length.
bool interiors_overlap(const Hyperrectangle& a, const Hyperrectangle& b) {
  for (std::size_t d = 0; d < a.dimension(); ++d) {
    if (std::min(a.hi[d], b.hi[d]) <= std::max(a.lo[d], b.lo[d])) return false;
  }
  return true;
}

}  // namespace

BoxDensity::BoxDensity(std::size_t dimension, std::vector<WeightedBox> boxes)
    : dimension_(dimension), boxes_(std::move(boxes)) {
  if (dimension_ == 0) throw InvalidInput("box density: dimension must be positive");
  if (boxes_.empty()) throw InvalidInput("box density: at least one box is required");
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    const auto& wb = boxes_[i];
    if (wb.box.dimension() != dimension_) {
      std::ostringstream msg;
      msg << "box density: box " << i << " has dimension " << wb.box.dimension() << ", expected "
          << dimension_;
      throw InvalidInput(msg.str());
    }
    // Re-run the width check in case the box was assembled field by field.
    Hyperrectangle(wb.box.lo, wb.box.hi);
    if (!std::isfinite(wb.weight) || !(wb.weight > 0.0)) {
      std::ostringstream msg;
      msg << "box density: box " << i << " has non-positive weight " << wb.weight;
      throw InvalidInput(msg.str());
    }
  }
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes_.size(); ++j) {
      if (interiors_overlap(boxes_[i].box, boxes_[j].box)) {
        std::ostringstream msg;
        msg << "box density: boxes " << i << " and " << j << " overlap";
        throw InvalidInput(msg.str());
      }
    }
  }
  const double mass = total_mass();
  if (std::abs(mass - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "box density: total mass " << mass << " differs from 1";
    throw InvalidInput(msg.str());
  }
}

double BoxDensity::total_mass() const {
  double m = 0.0;
  for (const auto& wb : boxes_) m += wb.weight * wb.box.volume();
  return m;
}

SampleSet::SampleSet(std::vector<Point> points) : points_(std::move(points)) {
  demands_.assign(points_.size(), points_.empty() ? 0.0 : 1.0 / static_cast<double>(points_.size()));
  validate();
}

SampleSet::SampleSet(std::vector<Point> points, std::vector<double> demands)
    : points_(std::move(points)), demands_(std::move(demands)) {
  validate();
}

bool SampleSet::uniform_demands() const {
  const double u = 1.0 / static_cast<double>(points_.size());
  return std::all_of(demands_.begin(), demands_.end(),
                     [u](double b) { return std::abs(b - u) <= 1e-12; });
}

void SampleSet::validate() const {
  if (points_.empty()) throw InvalidInput("samples: at least one sample is required");
  if (demands_.size() != points_.size()) {
    throw InvalidInput("samples: demand count does not match point count");
  }
  const std::size_t l = points_.front().size();
  if (l == 0) throw InvalidInput("samples: points must have positive dimension");
  double total = 0.0;
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (points_[j].size() != l) {
      std::ostringstream msg;
      msg << "samples: point " << j << " has dimension " << points_[j].size() << ", expected " << l;
      throw InvalidInput(msg.str());
    }
    for (double v : points_[j]) {
      if (!std::isfinite(v)) throw InvalidInput("samples: non-finite coordinate");
    }
    if (!std::isfinite(demands_[j]) || demands_[j] < 0.0) {
      std::ostringstream msg;
      msg << "samples: demand " << j << " is negative or non-finite";
      throw InvalidInput(msg.str());
    }
    total += demands_[j];
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "samples: demands sum to " << total << ", expected 1";
    throw InvalidInput(msg.str());
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (points_[i] == points_[j]) {
        std::ostringstream msg;
        msg << "samples: points " << i << " and " << j << " coincide";
        throw InvalidInput(msg.str());
      }
    }
  }
}

Instance::Instance(BoxDensity density_, SampleSet samples_)
    : density(std::move(density_)), samples(std::move(samples_)) {
  if (density.dimension() != samples.dimension()) {
    std::ostringstream msg;
    msg << "instance: density dimension " << density.dimension() << " differs from sample dimension "
        << samples.dimension();
    throw InvalidInput(msg.str());
  }
}

InstanceStats compute_stats(const Instance& instance) {
  const std::size_t n = instance.num_samples();
  const std::size_t l = instance.dimension();
  const std::size_t k = instance.num_boxes();

  InstanceStats st;
  st.total_mass = instance.density.total_mass();

  double d2 = 0.0;
  for (const auto& y : instance.samples.points()) d2 = std::max(d2, squared_norm(y));
  // The farthest corner of a box picks the larger |coordinate| on every axis.
  for (const auto& wb : instance.density.boxes()) {
    double c2 = 0.0;
    for (std::size_t d = 0; d < l; ++d) {
      c2 += std::max(wb.box.lo[d] * wb.box.lo[d], wb.box.hi[d] * wb.box.hi[d]);
    }
    d2 = std::max(d2, c2);
  }
  st.max_norm = std::sqrt(d2);

  double s = std::numeric_limits<double>::infinity();
  const auto& pts = instance.samples.points();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) s = std::min(s, std::sqrt(squared_distance(pts[i], pts[j])));
  }
  for (const auto& wb : instance.density.boxes()) s = std::min(s, wb.box.min_width());
  st.min_scale = s;

  st.smoothness = 2.0 * static_cast<double>(n) * static_cast<double>(l) * static_cast<double>(k) / (s * s);

  const std::size_t corners = l < 60 ? (std::size_t{1} << l) : std::numeric_limits<std::size_t>::max();
  st.reference_set_size = corners > (std::numeric_limits<std::size_t>::max() - n) / k
                              ? std::numeric_limits<std::size_t>::max()
                              : k * corners + n;
  return st;
}

}  // namespace wassest
