#include "dmm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_constant(double value) { return std::max(value, kConstantFloor); }

// Feasible region for one player in a gap computation: either a domain or a
// ball slice of the restriction (radius may be zero).
struct Region {
  const DomainSet* domain = nullptr;
  Vector center;
  double radius = 0.0;
};

Region slice_of(const DomainSet& restriction, const Vector& fixed, int fixed_offset, int free_offset,
                int free_dim) {
  const Vector c = restriction.center();
  const double used = (fixed - c.segment(fixed_offset, fixed.size())).squaredNorm();
  const double remaining = restriction.radius() * restriction.radius() - used;
  if (remaining < -1e-12 * restriction.radius() * restriction.radius()) {
    throw std::invalid_argument("averaged point lies outside the restriction set");
  }
  Region region;
  region.center = c.segment(free_offset, free_dim);
  region.radius = std::sqrt(std::max(remaining, 0.0));
  return region;
}

// max over the region of <b, v> - (mu/2)|v|^2.
double support(const Region& region, const Vector& b, double mu) {
  if (region.domain != nullptr) {
    const DomainSet& set = *region.domain;
    if (mu > 0.0) {
      const Vector v = set.project(b / mu);
      return b.dot(v) - 0.5 * mu * v.squaredNorm();
    }
    switch (set.kind()) {
      case DomainKind::kBox:
        return b.dot(set.center()) + b.cwiseAbs().dot(set.half_widths());
      case DomainKind::kBall:
        return b.dot(set.center()) + set.radius() * b.norm();
      case DomainKind::kAll:
        throw std::domain_error("gap undefined: unbounded domain and no strong concavity");
    }
  }
  if (mu > 0.0) {
    Vector v = b / mu;
    const double dist = (v - region.center).norm();
    if (dist > region.radius) {
      v = region.center + (region.radius / dist) * (v - region.center);
    }
    return b.dot(v) - 0.5 * mu * v.squaredNorm();
  }
  return b.dot(region.center) + region.radius * b.norm();
}

// Calls visit(p) for grid points covering the region at the given spacing. For
// balls the grid covers the bounding cube; points outside are additionally
// mapped radially onto the sphere so the boundary is sampled densely.
void enumerate_region(const Region& region, double resolution,
                      const std::function<void(const Vector&)>& visit) {
  Vector lo;
  Vector hi;
  bool is_ball = false;
  Vector center;
  double radius = 0.0;
  if (region.domain != nullptr) {
    const DomainSet& set = *region.domain;
    if (set.kind() == DomainKind::kAll) {
      throw std::domain_error("gap oracle needs a bounded region");
    }
    if (set.kind() == DomainKind::kBox) {
      lo = set.center() - set.half_widths();
      hi = set.center() + set.half_widths();
    } else {
      is_ball = true;
      center = set.center();
      radius = set.radius();
    }
  } else {
    is_ball = true;
    center = region.center;
    radius = region.radius;
  }
  if (is_ball) {
    lo = center.array() - radius;
    hi = center.array() + radius;
  }

  const int d = static_cast<int>(lo.size());
  std::vector<long> counts(d);
  for (int i = 0; i < d; ++i) {
    counts[i] = static_cast<long>(std::ceil((hi(i) - lo(i)) / resolution - 1e-9)) + 1;
  }
  std::vector<long> index(d, 0);
  Vector p(d);
  while (true) {
    for (int i = 0; i < d; ++i) {
      p(i) = std::min(lo(i) + static_cast<double>(index[i]) * resolution, hi(i));
    }
    if (!is_ball) {
      visit(p);
    } else {
      const double dist = (p - center).norm();
      if (dist <= radius) {
        visit(p);
      } else {
        visit(center + (radius / dist) * (p - center));
      }
    }
    int i = 0;
    while (i < d && ++index[i] == counts[i]) {
      index[i] = 0;
      ++i;
    }
    if (i == d) break;
  }
}

}  // namespace

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kBilinear:
      return "bilinear";
    case ProblemKind::kQuadraticCC:
      return "quadratic_cc";
    case ProblemKind::kQuadraticSCSC:
      return "quadratic_scsc";
  }
  return "unknown";
}

double largest_singular_value(const Matrix& a, double rel_tol, int max_iterations) {
  if (a.size() == 0) return 0.0;
  Vector v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 1.0 + 1e-3 * static_cast<double>(i);
  v.normalize();
  double sigma = (a * v).norm();
  if (sigma == 0.0) {
    // Start vector in the null space; fall back to the largest column norm as
    // a new start.
    Eigen::Index col = 0;
    if (a.colwise().norm().maxCoeff(&col) == 0.0) return 0.0;
    v = Vector::Unit(a.cols(), col);
    sigma = (a * v).norm();
  }
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = a.transpose() * (a * v);
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    const double next = (a * v).norm();
    const bool done = std::abs(next - sigma) <= rel_tol * next;
    sigma = next;
    if (done) break;
  }
  return sigma;
}

SaddleProblem::SaddleProblem(ProblemKind kind, double mu, Matrix coupling, DomainSet domain_x,
                             DomainSet domain_y)
    : kind_(kind),
      mu_(mu),
      coupling_(std::move(coupling)),
      domain_x_(std::move(domain_x)),
      domain_y_(std::move(domain_y)) {
  if (coupling_.rows() == 0 || coupling_.cols() == 0) {
    throw std::invalid_argument("coupling matrix must be non-empty");
  }
  if (!coupling_.allFinite()) throw std::invalid_argument("coupling matrix must be finite");
  if (domain_x_.dim() != dim_x() || domain_y_.dim() != dim_y()) {
    throw std::invalid_argument("domain dimensions do not match the coupling matrix");
  }
  if (!(mu_ >= 0.0) || !std::isfinite(mu_)) throw std::invalid_argument("mu must be >= 0");
  saddle_x_ = Vector::Zero(dim_x());
  saddle_y_ = Vector::Zero(dim_y());
  if (!domain_x_.contains(saddle_x_) || !domain_y_.contains(saddle_y_)) {
    throw std::invalid_argument("built-in instances require the origin inside both domains");
  }

  const double sigma = largest_singular_value(coupling_);
  const double rx = domain_x_.max_norm();
  const double ry = domain_y_.max_norm();
  constants_.mu = mu_;
  constants_.L_raw = mu_ + sigma;
  if (std::isinf(rx) || std::isinf(ry)) {
    constants_.G_raw = kInf;
  } else {
    constants_.G_raw = std::max(mu_ * rx + sigma * ry, mu_ * ry + sigma * rx);
  }
  constants_.L = clamp_constant(constants_.L_raw);
  constants_.G = clamp_constant(constants_.G_raw);
  constants_.D = std::max(domain_x_.diameter(), domain_y_.diameter());
}

SaddleProblem SaddleProblem::Bilinear(int dim, const DomainSet& domain) {
  if (domain.dim() != dim) throw std::invalid_argument("domain dimension must equal dim");
  return SaddleProblem(ProblemKind::kBilinear, 0.0, Matrix::Identity(dim, dim), domain, domain);
}

SaddleProblem SaddleProblem::QuadraticCC(Matrix coupling, DomainSet domain_x,
                                         DomainSet domain_y) {
  if (!domain_x.bounded() || !domain_y.bounded()) {
    throw std::invalid_argument("quadratic_cc requires bounded domains");
  }
  return SaddleProblem(ProblemKind::kQuadraticCC, 0.0, std::move(coupling), std::move(domain_x),
                       std::move(domain_y));
}

SaddleProblem SaddleProblem::QuadraticSCSC(double mu, Matrix coupling) {
  const auto rows = static_cast<int>(coupling.rows());
  const auto cols = static_cast<int>(coupling.cols());
  return QuadraticSCSC(mu, std::move(coupling), DomainSet::All(std::max(rows, 1)),
                       DomainSet::All(std::max(cols, 1)));
}

SaddleProblem SaddleProblem::QuadraticSCSC(double mu, Matrix coupling, DomainSet domain_x,
                                           DomainSet domain_y) {
  if (!(mu > 0.0)) throw std::invalid_argument("quadratic_scsc requires mu > 0");
  return SaddleProblem(ProblemKind::kQuadraticSCSC, mu, std::move(coupling), std::move(domain_x),
                       std::move(domain_y));
}

void SaddleProblem::check_xy(const Vector& x, const Vector& y) const {
  if (x.size() != dim_x() || y.size() != dim_y()) {
    std::ostringstream msg;
    msg << "dimension mismatch: expected (" << dim_x() << ", " << dim_y() << "), got ("
        << x.size() << ", " << y.size() << ")";
    throw std::invalid_argument(msg.str());
  }
}

double SaddleProblem::value(const Vector& x, const Vector& y) const {
  check_xy(x, y);
  return 0.5 * mu_ * (x.squaredNorm() - y.squaredNorm()) + x.dot(coupling_ * y);
}

Vector SaddleProblem::grad_x(const Vector& x, const Vector& y) const {
  check_xy(x, y);
  if (mu_ == 0.0) return coupling_ * y;
  return mu_ * x + coupling_ * y;
}

Vector SaddleProblem::grad_y(const Vector& x, const Vector& y) const {
  check_xy(x, y);
  if (mu_ == 0.0) return coupling_.transpose() * x;
  return coupling_.transpose() * x - mu_ * y;
}

Vector SaddleProblem::phi(const Vector& z) const {
  if (z.size() != dim()) {
    throw std::invalid_argument("dimension mismatch: z has " + std::to_string(z.size()) +
                                " coordinates, expected " + std::to_string(dim()));
  }
  const auto x = z.head(dim_x());
  const auto y = z.tail(dim_y());
  Vector out(dim());
  if (mu_ == 0.0) {
    out.head(dim_x()) = coupling_ * y;
    out.tail(dim_y()) = -(coupling_.transpose() * x);
  } else {
    out.head(dim_x()) = mu_ * x + coupling_ * y;
    out.tail(dim_y()) = -(coupling_.transpose() * x - mu_ * y);
  }
  return out;
}

Vector SaddleProblem::stack(const Vector& x, const Vector& y) const {
  check_xy(x, y);
  Vector z(dim());
  z << x, y;
  return z;
}

std::string SaddleProblem::describe() const {
  std::ostringstream out;
  out << to_string(kind_) << "(dim_x=" << dim_x() << ", dim_y=" << dim_y();
  if (mu_ > 0.0) out << ", mu=" << mu_;
  out << ", X=" << domain_x_.describe() << ", Y=" << domain_y_.describe() << ')';
  return out.str();
}

double duality_gap(const SaddleProblem& problem, const Vector& xbar, const Vector& ybar,
                   const std::optional<DomainSet>& restriction) {
  if (xbar.size() != problem.dim_x() || ybar.size() != problem.dim_y()) {
    throw std::invalid_argument("dimension mismatch in duality_gap");
  }
  Region xs;
  Region ys;
  if (restriction) {
    if (restriction->kind() != DomainKind::kBall || restriction->dim() != problem.dim()) {
      throw std::invalid_argument("restriction must be a ball in the stacked space");
    }
    ys = slice_of(*restriction, xbar, 0, problem.dim_x(), problem.dim_y());
    xs = slice_of(*restriction, ybar, problem.dim_x(), 0, problem.dim_x());
  } else {
    if (!problem.domain_x().contains(xbar, 1e-9) || !problem.domain_y().contains(ybar, 1e-9)) {
      throw std::invalid_argument("averaged point lies outside the problem domain");
    }
    xs.domain = &problem.domain_x();
    ys.domain = &problem.domain_y();
  }
  const double mu = problem.mu();
  const Matrix& a = problem.coupling();
  // max_y f(xbar, y) = (mu/2)|xbar|^2 + support_Y(A^T xbar)
  // min_x f(x, ybar) = -(mu/2)|ybar|^2 - support_X(-A ybar)
  const double gap = 0.5 * mu * (xbar.squaredNorm() + ybar.squaredNorm()) +
                     support(ys, a.transpose() * xbar, mu) + support(xs, -(a * ybar), mu);
  return std::max(gap, 0.0);
}

double gap_oracle_bruteforce(const SaddleProblem& problem, const Vector& xbar,
                             const Vector& ybar, double resolution,
                             const std::optional<DomainSet>& restriction) {
  if (problem.dim() > 4) {
    throw std::invalid_argument("gap oracle is limited to dim_x + dim_y <= 4");
  }
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be > 0");
  Region xs;
  Region ys;
  if (restriction) {
    ys = slice_of(*restriction, xbar, 0, problem.dim_x(), problem.dim_y());
    xs = slice_of(*restriction, ybar, problem.dim_x(), 0, problem.dim_x());
  } else {
    xs.domain = &problem.domain_x();
    ys.domain = &problem.domain_y();
  }
  double best_max = -kInf;
  enumerate_region(ys, resolution,
                   [&](const Vector& y) { best_max = std::max(best_max, problem.value(xbar, y)); });
  double best_min = kInf;
  enumerate_region(xs, resolution,
                   [&](const Vector& x) { best_min = std::min(best_min, problem.value(x, ybar)); });
  return best_max - best_min;
}

}  // namespace dmm
