#pragma once

#include <optional>
#include <string>

#include "dmm/domain.hpp"
#include "dmm/types.hpp"

namespace dmm {

enum class ProblemKind { kBilinear, kQuadraticCC, kQuadraticSCSC };

std::string to_string(ProblemKind kind);

// Analytic constants of an instance. G and L are reported clamped to at least
// 1 + 1e-9 (the step-size and bound formulas assume G, L > 1); the raw values
// are kept alongside. G and D are +inf on unbounded domains.
struct ProblemConstants {
  double G = 0.0;
  double L = 0.0;
  double mu = 0.0;
  double D = 0.0;
  double G_raw = 0.0;
  double L_raw = 0.0;
};

inline constexpr double kConstantFloor = 1.0 + 1e-9;

// Largest singular value of `a` by power iteration on A^T A.
double largest_singular_value(const Matrix& a, double rel_tol = 1e-13,
                              int max_iterations = 100000);

// f(x, y) = (mu/2)|x|^2 - (mu/2)|y|^2 + <x, A y> over X x Y.
//
// Every built-in instance has its saddle point at the origin, which is
// required to lie in both domains. Instances are immutable.
class SaddleProblem {
 public:
  // <x, y> on R^dim x R^dim, the same domain for both players.
  static SaddleProblem Bilinear(int dim, const DomainSet& domain);
  static SaddleProblem QuadraticCC(Matrix coupling, DomainSet domain_x, DomainSet domain_y);
  static SaddleProblem QuadraticSCSC(double mu, Matrix coupling);
  static SaddleProblem QuadraticSCSC(double mu, Matrix coupling, DomainSet domain_x,
                                     DomainSet domain_y);

  ProblemKind kind() const { return kind_; }
  int dim_x() const { return static_cast<int>(coupling_.rows()); }
  int dim_y() const { return static_cast<int>(coupling_.cols()); }
  int dim() const { return dim_x() + dim_y(); }
  const Matrix& coupling() const { return coupling_; }
  const DomainSet& domain_x() const { return domain_x_; }
  const DomainSet& domain_y() const { return domain_y_; }
  bool bounded() const { return domain_x_.bounded() && domain_y_.bounded(); }
  const ProblemConstants& constants() const { return constants_; }
  double mu() const { return mu_; }

  const Vector& saddle_x() const { return saddle_x_; }
  const Vector& saddle_y() const { return saddle_y_; }
  Vector saddle() const { return stack(saddle_x_, saddle_y_); }

  double value(const Vector& x, const Vector& y) const;
  Vector grad_x(const Vector& x, const Vector& y) const;
  Vector grad_y(const Vector& x, const Vector& y) const;
  // Saddle operator [grad_x f; -grad_y f] at z = [x; y].
  Vector phi(const Vector& z) const;

  Vector stack(const Vector& x, const Vector& y) const;
  Vector x_part(const Vector& z) const { return z.head(dim_x()); }
  Vector y_part(const Vector& z) const { return z.tail(dim_y()); }

  std::string describe() const;

 private:
  SaddleProblem(ProblemKind kind, double mu, Matrix coupling, DomainSet domain_x,
                DomainSet domain_y);

  void check_xy(const Vector& x, const Vector& y) const;

  ProblemKind kind_;
  double mu_;
  Matrix coupling_;
  DomainSet domain_x_;
  DomainSet domain_y_;
  Vector saddle_x_;
  Vector saddle_y_;
  ProblemConstants constants_;
};

// max_{y} f(xbar, y) - min_{x} f(x, ybar) in closed form.
//
// Without a restriction the extrema are taken over the problem domains. With
// a restriction (a ball in the stacked z-space, e.g. the set H around the
// saddle) they are taken over its slices {y : (xbar, y) in ball} and
// {x : (x, ybar) in ball} instead. Throws std::domain_error("gap undefined")
// when an extremum is unbounded.
double duality_gap(const SaddleProblem& problem, const Vector& xbar, const Vector& ybar,
                   const std::optional<DomainSet>& restriction = std::nullopt);

// Grid-search estimate of the same gap by direct evaluation of value(). Only
// meant as an independent check on duality_gap; requires a bounded feasible
// region and dim_x + dim_y <= 4.
double gap_oracle_bruteforce(const SaddleProblem& problem, const Vector& xbar,
                             const Vector& ybar, double resolution,
                             const std::optional<DomainSet>& restriction = std::nullopt);

}  // namespace dmm
