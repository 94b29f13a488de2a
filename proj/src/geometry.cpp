#include "rigidmatch/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "rigidmatch/errors.hpp"

namespace rigidmatch {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

PointPattern::PointPattern(std::vector<Point> points, std::string label)
    : points_(std::move(points)), label_(std::move(label)) {
  if (points_.empty()) {
    throw Error(ErrorCode::invalid_input, "point pattern must contain at least one point");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw Error(ErrorCode::invalid_input,
                  "point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
}

PointPattern PointPattern::prefix(std::size_t count) const {
  if (count == 0 || count > points_.size()) {
    throw Error(ErrorCode::invalid_parameters,
                "prefix of " + std::to_string(count) + " points requested from a pattern of " +
                    std::to_string(points_.size()));
  }
  return PointPattern({points_.begin(), points_.begin() + static_cast<std::ptrdiff_t>(count)},
                      label_);
}

DistanceMatrix::DistanceMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim_ * dim_) {
    throw Error(ErrorCode::invalid_input, "distance matrix entry count does not match dim^2");
  }
}

DistanceMatrix distance_matrix(const PointPattern& p) {
  const std::size_t n = p.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = distance(p[i], p[j]);
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return DistanceMatrix(n, std::move(d));
}

void validate_assignment(const Assignment& a, std::size_t template_size,
                         std::size_t scene_size) {
  if (a.size() != template_size) {
    throw Error(ErrorCode::invalid_assignment,
                "assignment has " + std::to_string(a.size()) + " entries, template has " +
                    std::to_string(template_size));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= scene_size) {
      throw Error(ErrorCode::invalid_assignment,
                  "assignment maps template point " + std::to_string(i) + " to scene index " +
                      std::to_string(a[i]) + ", scene has " + std::to_string(scene_size));
    }
  }
}

double objective_residual(const PointPattern& tmpl, const PointPattern& scene,
                          const Assignment& a) {
  validate_assignment(a, tmpl.size(), scene.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    for (std::size_t j = i + 1; j < tmpl.size(); ++j) {
      const double diff = distance(tmpl[i], tmpl[j]) - distance(scene[a[i]], scene[a[j]]);
      sum += 2.0 * diff * diff;
    }
  }
  return sum;
}

std::size_t count_collisions(const Assignment& a) {
  std::vector<std::size_t> sorted = a.map;
  std::sort(sorted.begin(), sorted.end());
  std::size_t collisions = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > 1) ++collisions;
    i = j;
  }
  return collisions;
}

double matching_accuracy(const Assignment& a, const Assignment& truth) {
  if (a.size() != truth.size() || a.size() == 0) {
    throw Error(ErrorCode::invalid_assignment, "accuracy needs two assignments of equal, nonzero length");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < a.size(); ++i) correct += a[i] == truth[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(a.size());
}

Point RigidTransform::apply(const Point& p) const {
  const double y = reflect ? -p.y : p.y;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * y + translation.x, s * p.x + c * y + translation.y};
}

PointPattern apply_rigid_transform(const PointPattern& p, const RigidTransform& t) {
  std::vector<Point> out;
  out.reserve(p.size());
  for (const Point& q : p.points()) out.push_back(t.apply(q));
  return PointPattern(std::move(out), p.label());
}

PointPattern apply_rigid_transform(const PointPattern& p, double angle, Point translation,
                                   bool reflect) {
  return apply_rigid_transform(p, RigidTransform{angle, translation, reflect});
}

double diameter(const PointPattern& p) {
  double best = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) best = std::max(best, distance(p[i], p[j]));
  }
  return best;
}

bool in_general_position(std::span<const Point> pts, double area_tol) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const double cross = (pts[j].x - pts[i].x) * (pts[k].y - pts[i].y) -
                             (pts[j].y - pts[i].y) * (pts[k].x - pts[i].x);
        if (0.5 * std::abs(cross) <= area_tol) return false;
      }
    }
  }
  return true;
}

Instance generate_instance(std::size_t n, std::size_t m, double eps, std::uint64_t seed) {
  if (n < 3 || n > m) {
    throw Error(ErrorCode::invalid_parameters,
                "instance needs 3 <= n <= m, got n=" + std::to_string(n) + " m=" + std::to_string(m));
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::invalid_parameters, "noise level must be finite and >= 0");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Point> base(n);
  constexpr int kMaxResamples = 10000;
  for (int attempt = 0;; ++attempt) {
    for (Point& p : base) p = {unit(rng), unit(rng)};
    if (in_general_position(base)) break;
    if (attempt == kMaxResamples) {
      throw Error(ErrorCode::invalid_parameters, "could not sample a template in general position");
    }
  }

  std::vector<Point> jittered = base;
  if (eps > 0.0) {
    std::normal_distribution<double> noise(0.0, eps);
    for (Point& p : jittered) {
      p.x += noise(rng);
      p.y += noise(rng);
    }
  }

  RigidTransform transform;
  transform.angle = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  std::uniform_real_distribution<double> shift(-0.5, 0.5);
  transform.translation = {shift(rng), shift(rng)};
  transform.reflect = std::bernoulli_distribution(0.5)(rng);

  std::vector<std::size_t> slots(m);
  for (std::size_t i = 0; i < m; ++i) slots[i] = i;
  std::shuffle(slots.begin(), slots.end(), rng);

  std::vector<Point> scene(m);
  Assignment truth;
  truth.map.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    scene[slots[i]] = transform.apply(jittered[i]);
    truth.map[i] = slots[i];
  }
  for (std::size_t k = n; k < m; ++k) scene[slots[k]] = {unit(rng), unit(rng)};

  return Instance{PointPattern(std::move(base), "template"),
                  PointPattern(std::move(scene), "scene"), std::move(truth), transform};
}

}  // namespace rigidmatch
