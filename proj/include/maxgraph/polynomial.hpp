#pragma once

#include <complex>
#include <span>
#include <vector>

namespace maxgraph {

/// Real polynomial, coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() : c_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
  }

  /// Monic polynomial prod (z - r).
  static Polynomial from_roots(std::span<const double> roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
      std::vector<double> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= r * c[i];
      }
      c = std::move(next);
    }
    return Polynomial(std::move(c));
  }

  std::size_t degree() const { return c_.size() - 1; }
  std::span<const double> coefficients() const { return c_; }
  double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }

  template <class T>
  T operator()(T z) const {
    T acc = T(c_.back());
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * z + T(c_[i]);
    return acc;
  }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    std::vector<double> r(p.c_.size() + q.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(r));
  }

 private:
  std::vector<double> c_;
};

}  // namespace maxgraph
