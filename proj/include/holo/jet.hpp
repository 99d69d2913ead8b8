#pragma once

// First-order forward-mode jets over up to kMaxDim coordinates.

#include <array>
#include <cmath>
#include <cstddef>

namespace holo {

inline constexpr int kMaxDim = 4;

struct Jet {
  double value = 0.0;
  std::array<double, kMaxDim> d{};

  constexpr Jet() = default;
  constexpr Jet(double v) : value(v) {}  // NOLINT: constants promote implicitly

  static constexpr Jet variable(double v, int index) {
    Jet j(v);
    j.d[static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  constexpr Jet& operator+=(const Jet& o) {
    value += o.value;
    for (int i = 0; i < kMaxDim; ++i) d[i] += o.d[i];
    return *this;
  }
  constexpr Jet& operator-=(const Jet& o) {
    value -= o.value;
    for (int i = 0; i < kMaxDim; ++i) d[i] -= o.d[i];
    return *this;
  }
  constexpr Jet& operator*=(const Jet& o) {
    for (int i = 0; i < kMaxDim; ++i) d[i] = d[i] * o.value + value * o.d[i];
    value *= o.value;
    return *this;
  }
  constexpr Jet& operator/=(const Jet& o) {
    const double inv = 1.0 / o.value;
    const double q = value * inv;
    for (int i = 0; i < kMaxDim; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    value = q;
    return *this;
  }
};

constexpr Jet operator-(Jet a) {
  a.value = -a.value;
  for (auto& x : a.d) x = -x;
  return a;
}
constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }
constexpr Jet operator*(Jet a, const Jet& b) { return a *= b; }
constexpr Jet operator/(Jet a, const Jet& b) { return a /= b; }

// Applies a scalar function with known derivative through the chain rule.
constexpr Jet chain(const Jet& a, double value, double derivative) {
  Jet r(value);
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = derivative * a.d[i];
  return r;
}

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.value);
  return chain(a, s, 0.5 / s);
}
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e);
}
inline Jet log(const Jet& a) { return chain(a, std::log(a.value), 1.0 / a.value); }
inline Jet sin(const Jet& a) { return chain(a, std::sin(a.value), std::cos(a.value)); }
inline Jet cos(const Jet& a) { return chain(a, std::cos(a.value), -std::sin(a.value)); }
inline Jet tanh(const Jet& a) {
  const double t = std::tanh(a.value);
  return chain(a, t, 1.0 - t * t);
}
inline Jet pow(const Jet& a, double p) {
  const double v = std::pow(a.value, p);
  return chain(a, v, p * std::pow(a.value, p - 1.0));
}

// Scalar overloads so templated evaluators work for both double and Jet.
inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value; }

}  // namespace holo
