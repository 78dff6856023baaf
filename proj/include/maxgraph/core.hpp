#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>

namespace maxgraph {

using Complex = std::complex<double>;

/// Side of a slit from which a boundary value is taken.
enum class Bank { north, south };

inline const char* to_string(Bank b) { return b == Bank::north ? "N" : "S"; }

/// A point on the boundary of the slit domain: slit index (0-based),
/// real coordinate on the slit and the bank it is approached from.
struct SlitPoint {
  std::size_t slit = 0;
  double x = 0.0;
  Bank bank = Bank::north;
};

/// Either an ordinary point of the slit complement or a bank point.
using Location = std::variant<Complex, SlitPoint>;

inline Complex coordinate(const Location& p) {
  if (const auto* s = std::get_if<SlitPoint>(&p)) return {s->x, 0.0};
  return std::get<Complex>(p);
}

/// Point of Lorentz-Minkowski 3-space, coordinates (x1, x2, x3) with
/// metric x1^2 + x2^2 - x3^2.
struct Vec3 {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0;

  Vec3& operator+=(const Vec3& o) {
    x1 += o.x1;
    x2 += o.x2;
    x3 += o.x3;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x1 -= o.x1;
    x2 -= o.x2;
    x3 -= o.x3;
    return *this;
  }
  Vec3& operator*=(double s) {
    x1 *= s;
    x2 *= s;
    x3 *= s;
    return *this;
  }
  friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double max_abs(const Vec3& v) {
  return std::fmax(std::fabs(v.x1), std::fmax(std::fabs(v.x2), std::fabs(v.x3)));
}

/// Squared Lorentzian norm <v, v>.
inline double lorentz_norm2(const Vec3& v) { return v.x1 * v.x1 + v.x2 * v.x2 - v.x3 * v.x3; }

inline double horizontal_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x1 - b.x1, a.x2 - b.x2);
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input (branch points, spin choices, configuration).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A plain complex point was given inside a slit where the bank matters.
class OnCutError : public Error {
 public:
  using Error::Error;
};

/// Integrand evaluated exactly at a branch point.
class EndpointSingularityError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// Internal consistency failure of a constructed surface: a slit that does
/// not collapse, a fold in projection, a bad growth fit.
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace maxgraph
