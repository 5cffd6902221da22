#pragma once

#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace quadsym {

/// 2x2 matrix [[a, b], [c, d]] over a commutative ring T.
template <typename T>
struct Mat2 {
  T a{}, b{}, c{}, d{};

  static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

  T det() const { return a * d - b * c; }
  T trace() const { return a + d; }
  /// Adjugate: inverse up to the factor det.
  Mat2 adj() const { return {d, -b, -c, a}; }
  Mat2 inverse() const {
    T dt = det();
    if (dt == T(0)) throw std::domain_error("Mat2::inverse: singular matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator*(const T& s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator!=(const Mat2& x, const Mat2& y) { return !(x == y); }

  Mat2 pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Mat2 r = identity(), base = *this;
    for (; e > 0; e >>= 1) {
      if (e & 1) r = r * base;
      base = base * base;
    }
    return r;
  }

  template <typename U, typename F>
  Mat2<U> map(F&& f) const {
    return {f(a), f(b), f(c), f(d)};
  }

  friend std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
  }
  std::string str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
  }
};

using IntMat2 = Mat2<long>;

}  // namespace quadsym
