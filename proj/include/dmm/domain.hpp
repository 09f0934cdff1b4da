#pragma once

#include <string>

#include "dmm/types.hpp"

namespace dmm {

enum class DomainKind { kBox, kBall, kAll };

// A closed convex subset of R^d with an exact Euclidean projection.
// Boxes are axis-aligned (center +- half_width per coordinate); balls are
// Euclidean. `kAll` is the whole space and projects as the identity.
class DomainSet {
 public:
  static DomainSet Box(Vector center, Vector half_widths);
  static DomainSet Box(int dim, double half_width);
  static DomainSet Ball(Vector center, double radius);
  static DomainSet Ball(int dim, double radius);
  static DomainSet All(int dim);

  DomainKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(center_.size()); }
  bool bounded() const { return kind_ != DomainKind::kAll; }
  const Vector& center() const { return center_; }
  const Vector& half_widths() const { return half_widths_; }
  double radius() const { return radius_; }

  // Exact Euclidean diameter; +inf for the whole space.
  double diameter() const;
  // sup of ||p|| over the set; +inf when unbounded.
  double max_norm() const;

  Vector project(const Vector& p) const;
  bool contains(const Vector& p, double tol = 1e-12) const;

  // Short textual form, e.g. "ball:1" or "box:0.5" for origin-centered sets.
  std::string describe() const;

 private:
  DomainSet(DomainKind kind, Vector center, Vector half_widths, double radius)
      : kind_(kind),
        center_(std::move(center)),
        half_widths_(std::move(half_widths)),
        radius_(radius) {}

  void check_dim(const Vector& p) const;

  DomainKind kind_;
  Vector center_;
  Vector half_widths_;
  double radius_;
};

}  // namespace dmm
