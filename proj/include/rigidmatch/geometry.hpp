#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rigidmatch {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

/// Ordered, non-empty set of finite 2-D points. Index i always names the same
/// point for the lifetime of the pattern.
class PointPattern {
 public:
  explicit PointPattern(std::vector<Point> points, std::string label = {});

  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const noexcept { return points_; }
  const std::string& label() const noexcept { return label_; }

  /// First `count` points, keeping their order.
  PointPattern prefix(std::size_t count) const;

  friend bool operator==(const PointPattern& a, const PointPattern& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<Point> points_;
  std::string label_;
};

/// Dense symmetric matrix of pairwise Euclidean distances.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t dim, std::vector<double> entries);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * dim_ + j];
  }
  std::span<const double> entries() const noexcept { return entries_; }

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

DistanceMatrix distance_matrix(const PointPattern& p);

/// Map from template indices to scene indices. Non-injective maps are allowed.
struct Assignment {
  std::vector<std::size_t> map;

  std::size_t size() const noexcept { return map.size(); }
  std::size_t operator[](std::size_t i) const { return map[i]; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Throws invalid_assignment unless `a` maps every template index into the scene.
void validate_assignment(const Assignment& a, std::size_t template_size,
                         std::size_t scene_size);

/// Squared Frobenius norm of D(template) - D(scene restricted by `a`); both
/// (i,j) and (j,i) contribute.
double objective_residual(const PointPattern& tmpl, const PointPattern& scene,
                          const Assignment& a);

/// Number of scene indices hit by more than one template index.
std::size_t count_collisions(const Assignment& a);

/// Fraction of template indices whose assignment equals `truth`.
double matching_accuracy(const Assignment& a, const Assignment& truth);

struct RigidTransform {
  double angle = 0.0;
  Point translation{};
  bool reflect = false;

  /// Reflection (y -> -y) is applied first, then rotation, then translation.
  Point apply(const Point& p) const;
};

PointPattern apply_rigid_transform(const PointPattern& p, const RigidTransform& t);
PointPattern apply_rigid_transform(const PointPattern& p, double angle,
                                   Point translation, bool reflect);

/// Largest pairwise distance.
double diameter(const PointPattern& p);

/// True when every point triple spans a triangle of area above `area_tol`.
bool in_general_position(std::span<const Point> points, double area_tol = 1e-9);

struct Instance {
  PointPattern tmpl;
  PointPattern scene;
  Assignment truth;
  RigidTransform transform;
};

/// Synthetic matching problem: n template points uniform in the unit square,
/// jittered by N(0, eps^2) per axis, moved by a random rigid transform and
/// shuffled among m - n uniform clutter points. Deterministic in `seed`.
Instance generate_instance(std::size_t n, std::size_t m, double eps,
                           std::uint64_t seed);

}  // namespace rigidmatch
