#include "dmm/domain.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dmm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(int dim) {
  if (dim <= 0) throw std::invalid_argument("domain dimension must be positive");
}
}  // namespace

DomainSet DomainSet::Box(Vector center, Vector half_widths) {
  require_dim(static_cast<int>(center.size()));
  if (center.size() != half_widths.size()) {
    throw std::invalid_argument("box center and half-widths differ in size");
  }
  if (!(half_widths.array() > 0.0).all() || !half_widths.allFinite()) {
    throw std::invalid_argument("box half-widths must be finite and > 0");
  }
  return DomainSet(DomainKind::kBox, std::move(center), std::move(half_widths), 0.0);
}

DomainSet DomainSet::Box(int dim, double half_width) {
  require_dim(dim);
  return Box(Vector::Zero(dim), Vector::Constant(dim, half_width));
}

DomainSet DomainSet::Ball(Vector center, double radius) {
  require_dim(static_cast<int>(center.size()));
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball radius must be finite and > 0");
  }
  return DomainSet(DomainKind::kBall, std::move(center), Vector(), radius);
}

DomainSet DomainSet::Ball(int dim, double radius) {
  require_dim(dim);
  return Ball(Vector::Zero(dim), radius);
}

DomainSet DomainSet::All(int dim) {
  require_dim(dim);
  return DomainSet(DomainKind::kAll, Vector::Zero(dim), Vector(), 0.0);
}

double DomainSet::diameter() const {
  switch (kind_) {
    case DomainKind::kBox:
      return 2.0 * half_widths_.norm();
    case DomainKind::kBall:
      return 2.0 * radius_;
    case DomainKind::kAll:
      break;
  }
  return kInf;
}

double DomainSet::max_norm() const {
  switch (kind_) {
    case DomainKind::kBox:
      return (center_.cwiseAbs() + half_widths_).norm();
    case DomainKind::kBall:
      return center_.norm() + radius_;
    case DomainKind::kAll:
      break;
  }
  return kInf;
}

void DomainSet::check_dim(const Vector& p) const {
  if (p.size() != center_.size()) {
    std::ostringstream msg;
    msg << "dimension mismatch: point has " << p.size() << " coordinates, set has "
        << center_.size();
    throw std::invalid_argument(msg.str());
  }
}

Vector DomainSet::project(const Vector& p) const {
  check_dim(p);
  switch (kind_) {
    case DomainKind::kBox:
      return p.cwiseMax(center_ - half_widths_).cwiseMin(center_ + half_widths_);
    case DomainKind::kBall: {
      const double dist = (p - center_).norm();
      if (dist <= radius_) return p;
      return center_ + (radius_ / dist) * (p - center_);
    }
    case DomainKind::kAll:
      break;
  }
  return p;
}

bool DomainSet::contains(const Vector& p, double tol) const {
  check_dim(p);
  switch (kind_) {
    case DomainKind::kBox:
      return ((p - center_).cwiseAbs().array() <= half_widths_.array() * (1.0 + tol) + tol)
          .all();
    case DomainKind::kBall:
      return (p - center_).norm() <= radius_ * (1.0 + tol) + tol;
    case DomainKind::kAll:
      break;
  }
  return p.allFinite();
}

std::string DomainSet::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case DomainKind::kBox:
      out << "box";
      if (center_.isZero() && (half_widths_.array() == half_widths_(0)).all()) {
        out << ':' << half_widths_(0);
      } else {
        out << "[center=" << center_.transpose() << "; hw=" << half_widths_.transpose() << ']';
      }
      break;
    case DomainKind::kBall:
      out << "ball:" << radius_;
      if (!center_.isZero()) out << "[center=" << center_.transpose() << ']';
      break;
    case DomainKind::kAll:
      out << "all";
      break;
  }
  return out.str();
}

}  // namespace dmm
