#pragma once

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>

#include "quadsym/arith.hpp"

namespace quadsym {

/// Element u + v*sqrt(d) of Q(sqrt d), d squarefree.
///
/// An element with v == 0 is rational and mixes freely with any field; two
/// elements with nonzero irrational parts must share d. For d == 1 the field
/// collapses to Q and v is folded into u.
class QuadExtElem {
 public:
  QuadExtElem() = default;
  QuadExtElem(long x) : u_(x) {}  // NOLINT(google-explicit-constructor)
  QuadExtElem(Rational x) : u_(std::move(x)) {}  // NOLINT(google-explicit-constructor)
  QuadExtElem(long d, Rational u, Rational v) : d_(d), u_(std::move(u)), v_(std::move(v)) {
    if (d == 0 || !is_squarefree(d)) throw std::invalid_argument("QuadExtElem: d must be squarefree");
    normalize();
  }

  /// sqrt(d) itself.
  static QuadExtElem sqrt_of(long d) { return QuadExtElem(d, 0, 1); }

  long d() const { return d_; }
  const Rational& u() const { return u_; }
  const Rational& v() const { return v_; }
  bool is_rational() const { return v_ == 0; }

  QuadExtElem conj() const { return make(d_, u_, -v_); }
  Rational norm() const { return u_ * u_ - v_ * v_ * d_; }
  Rational trace() const { return 2 * u_; }

  friend QuadExtElem operator+(const QuadExtElem& a, const QuadExtElem& b) {
    return make(common_d(a, b), a.u_ + b.u_, a.v_ + b.v_);
  }
  friend QuadExtElem operator-(const QuadExtElem& a, const QuadExtElem& b) {
    return make(common_d(a, b), a.u_ - b.u_, a.v_ - b.v_);
  }
  friend QuadExtElem operator-(const QuadExtElem& a) { return make(a.d_, -a.u_, -a.v_); }
  friend QuadExtElem operator*(const QuadExtElem& a, const QuadExtElem& b) {
    long d = common_d(a, b);
    return make(d, a.u_ * b.u_ + a.v_ * b.v_ * d, a.u_ * b.v_ + a.v_ * b.u_);
  }
  friend QuadExtElem operator/(const QuadExtElem& a, const QuadExtElem& b) {
    Rational n = b.norm();
    if (n == 0) throw std::domain_error("QuadExtElem: division by zero");
    QuadExtElem num = a * b.conj();
    return make(num.d_, num.u_ / n, num.v_ / n);
  }
  QuadExtElem& operator+=(const QuadExtElem& o) { return *this = *this + o; }
  QuadExtElem& operator-=(const QuadExtElem& o) { return *this = *this - o; }
  QuadExtElem& operator*=(const QuadExtElem& o) { return *this = *this * o; }
  QuadExtElem& operator/=(const QuadExtElem& o) { return *this = *this / o; }

  friend bool operator==(const QuadExtElem& a, const QuadExtElem& b) {
    if (a.v_ == 0 && b.v_ == 0) return a.u_ == b.u_;
    return a.d_ == b.d_ && a.u_ == b.u_ && a.v_ == b.v_;
  }
  friend bool operator!=(const QuadExtElem& a, const QuadExtElem& b) { return !(a == b); }

  /// Exact sign for real fields (d > 0 or rational); never uses floating point.
  int sign() const {
    int su = sgn(u_), sv = sgn(v_);
    if (sv == 0) return su;
    if (d_ < 0) throw std::domain_error("QuadExtElem::sign: element is not real");
    if (su == 0) return sv;
    if (su == sv) return su;
    // u and v*sqrt(d) have opposite signs: compare u^2 with v^2 d
    Rational diff = u_ * u_ - v_ * v_ * d_;
    int sd = sgn(diff);
    return sd == 0 ? 0 : (sd > 0 ? su : sv);
  }

  /// Compare two real elements exactly: negative, zero, positive.
  friend int compare(const QuadExtElem& a, const QuadExtElem& b) { return (a - b).sign(); }

  std::complex<double> to_complex() const {
    double uu = u_.get_d(), vv = v_.get_d();
    if (v_ == 0) return {uu, 0.0};
    if (d_ > 0) return {uu + vv * std::sqrt(static_cast<double>(d_)), 0.0};
    return {uu, vv * std::sqrt(static_cast<double>(-d_))};
  }

  std::string str() const {
    if (v_ == 0) return u_.get_str();
    std::string s = u_ == 0 ? "" : u_.get_str() + (v_ > 0 ? "+" : "");
    return s + v_.get_str() + "*sqrt(" + std::to_string(d_) + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const QuadExtElem& x) { return os << x.str(); }

 private:
  static int sgn(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }
  static QuadExtElem make(long d, Rational u, Rational v) {
    QuadExtElem r;
    r.d_ = d;
    r.u_ = std::move(u);
    r.v_ = std::move(v);
    r.normalize();
    return r;
  }
  static long common_d(const QuadExtElem& a, const QuadExtElem& b) {
    if (a.v_ == 0) return b.d_;
    if (b.v_ == 0) return a.d_;
    if (a.d_ != b.d_) throw std::invalid_argument("QuadExtElem: mixing different quadratic fields");
    return a.d_;
  }
  void normalize() {
    if (d_ == 1) {
      u_ += v_;
      v_ = 0;
    }
  }

  long d_ = 1;
  Rational u_ = 0;
  Rational v_ = 0;
};

}  // namespace quadsym
