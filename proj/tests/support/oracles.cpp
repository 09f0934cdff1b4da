#include "oracles.hpp"

#include <algorithm>

#include <Eigen/SVD>

namespace dmm::testing {

std::vector<Vector> reference_gda(const SaddleProblem& p, double alpha, const Vector& z1, int steps) {
  std::vector<Vector> out{z1};
  Vector x = p.x_part(z1);
  Vector y = p.y_part(z1);
  for (int i = 0; i < steps; ++i) {
    const Vector gx = p.grad_x(x, y);
    const Vector gy = p.grad_y(x, y);
    x = x - alpha * gx;
    y = y + alpha * gy;
    out.push_back(p.stack(x, y));
  }
  return out;
}

EgTrace reference_eg(const SaddleProblem& p, double alpha, const Vector& z1, int steps) {
  EgTrace t;
  t.iterates.push_back(z1);
  Vector x = p.x_part(z1);
  Vector y = p.y_part(z1);
  for (int i = 0; i < steps; ++i) {
    const Vector xh = p.domain_x().project(x - alpha * p.grad_x(x, y));
    const Vector yh = p.domain_y().project(y + alpha * p.grad_y(x, y));
    t.midpoints.push_back(p.stack(xh, yh));
    const Vector nx = p.domain_x().project(x - alpha * p.grad_x(xh, yh));
    const Vector ny = p.domain_y().project(y + alpha * p.grad_y(xh, yh));
    x = nx;
    y = ny;
    t.iterates.push_back(p.stack(x, y));
  }
  return t;
}

std::vector<Vector> reference_delayed_gda(const SaddleProblem& p, double alpha, const Vector& z1,
                                          const std::vector<int>& raw_delays) {
  std::vector<Vector> z{z1};
  for (std::size_t i = 0; i < raw_delays.size(); ++i) {
    const long k = static_cast<long>(i) + 1;
    const long tau = std::min<long>(raw_delays[i], k - 1);
    const Vector& stale = z[static_cast<std::size_t>(k - tau - 1)];
    const Vector sx = p.x_part(stale);
    const Vector sy = p.y_part(stale);
    const Vector gx = p.grad_x(sx, sy);
    const Vector gy = p.grad_y(sx, sy);
    const Vector& cur = z.back();
    z.push_back(p.stack(p.x_part(cur) - alpha * gx, p.y_part(cur) + alpha * gy));
  }
  return z;
}

Vector fd_grad_x(const SaddleProblem& p, const Vector& x, const Vector& y, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x;
    Vector xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (p.value(xp, y) - p.value(xm, y)) / (2.0 * h);
  }
  return g;
}

Vector fd_grad_y(const SaddleProblem& p, const Vector& x, const Vector& y, double h) {
  Vector g(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    Vector yp = y;
    Vector ym = y;
    yp(i) += h;
    ym(i) -= h;
    g(i) = (p.value(x, yp) - p.value(x, ym)) / (2.0 * h);
  }
  return g;
}

double sigma_max_svd(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

Vector random_vector(std::mt19937_64& rng, int dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = u(rng);
  return v;
}

Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

Vector random_point_in(std::mt19937_64& rng, const DomainSet& d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Vector v(d.dim());
    if (d.kind() == DomainKind::kBox) {
      for (int i = 0; i < d.dim(); ++i) v(i) = d.center()(i) + u(rng) * d.half_widths()(i);
      return v;
    }
    for (int i = 0; i < d.dim(); ++i) v(i) = u(rng);
    if (v.norm() <= 1.0) return d.center() + d.radius() * v;
  }
}

}  // namespace dmm::testing
