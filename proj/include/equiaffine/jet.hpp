#ifndef EQUIAFFINE_JET_HPP
#define EQUIAFFINE_JET_HPP

// Forward-mode jets: truncated Taylor expansions carrying exact first
// (Jet1) and second (Jet2) partial derivatives through arithmetic.

#include <array>
#include <cassert>
#include <span>

namespace equiaffine {

/// Largest chart dimension supported by the inline jet storage.
inline constexpr int kMaxDimension = 8;

struct Jet1 {
  double value = 0.0;
  int n = 0;
  std::array<double, kMaxDimension> gradient{};

  static Jet1 constant(int dim, double c) {
    Jet1 j;
    j.value = c;
    j.n = dim;
    return j;
  }
  static Jet1 variable(int dim, int k, double v) {
    Jet1 j = constant(dim, v);
    j.gradient[k] = 1.0;
    return j;
  }

  std::span<const double> grad() const { return {gradient.data(), static_cast<std::size_t>(n)}; }
};

/// Value, gradient and Hessian. The Hessian is stored dense, row-major, and
/// every operation writes the upper triangle and mirrors it, so it is
/// symmetric bit for bit.
struct Jet2 {
  double value = 0.0;
  int n = 0;
  std::array<double, kMaxDimension> gradient{};
  std::array<double, kMaxDimension * kMaxDimension> hess{};

  static Jet2 constant(int dim, double c) {
    Jet2 j;
    j.value = c;
    j.n = dim;
    return j;
  }
  static Jet2 variable(int dim, int k, double v) {
    Jet2 j = constant(dim, v);
    j.gradient[k] = 1.0;
    return j;
  }

  double hessian(int i, int k) const { return hess[i * kMaxDimension + k]; }
  std::span<const double> grad() const { return {gradient.data(), static_cast<std::size_t>(n)}; }

  void set_sym(int i, int k, double v) {
    hess[i * kMaxDimension + k] = v;
    hess[k * kMaxDimension + i] = v;
  }
};

// ---- Jet1 arithmetic -------------------------------------------------------

inline Jet1 operator+(const Jet1& a, const Jet1& b) {
  Jet1 r = Jet1::constant(a.n, a.value + b.value);
  for (int k = 0; k < a.n; ++k) r.gradient[k] = a.gradient[k] + b.gradient[k];
  return r;
}

inline Jet1 operator-(const Jet1& a, const Jet1& b) {
  Jet1 r = Jet1::constant(a.n, a.value - b.value);
  for (int k = 0; k < a.n; ++k) r.gradient[k] = a.gradient[k] - b.gradient[k];
  return r;
}

inline Jet1 operator-(const Jet1& a) {
  Jet1 r = Jet1::constant(a.n, -a.value);
  for (int k = 0; k < a.n; ++k) r.gradient[k] = -a.gradient[k];
  return r;
}

inline Jet1 operator*(const Jet1& a, const Jet1& b) {
  Jet1 r = Jet1::constant(a.n, a.value * b.value);
  for (int k = 0; k < a.n; ++k) r.gradient[k] = a.value * b.gradient[k] + b.value * a.gradient[k];
  return r;
}

/// f(a) given f, f' and f'' evaluated at a.value.
inline Jet1 chain(const Jet1& a, double f, double df, double /*d2f*/) {
  Jet1 r = Jet1::constant(a.n, f);
  for (int k = 0; k < a.n; ++k) r.gradient[k] = df * a.gradient[k];
  return r;
}

// ---- Jet2 arithmetic -------------------------------------------------------

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r = Jet2::constant(a.n, a.value + b.value);
  for (int i = 0; i < a.n; ++i) {
    r.gradient[i] = a.gradient[i] + b.gradient[i];
    for (int k = i; k < a.n; ++k) r.set_sym(i, k, a.hessian(i, k) + b.hessian(i, k));
  }
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r = Jet2::constant(a.n, a.value - b.value);
  for (int i = 0; i < a.n; ++i) {
    r.gradient[i] = a.gradient[i] - b.gradient[i];
    for (int k = i; k < a.n; ++k) r.set_sym(i, k, a.hessian(i, k) - b.hessian(i, k));
  }
  return r;
}

inline Jet2 operator-(const Jet2& a) {
  Jet2 r = Jet2::constant(a.n, -a.value);
  for (int i = 0; i < a.n; ++i) {
    r.gradient[i] = -a.gradient[i];
    for (int k = i; k < a.n; ++k) r.set_sym(i, k, -a.hessian(i, k));
  }
  return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r = Jet2::constant(a.n, a.value * b.value);
  for (int i = 0; i < a.n; ++i) {
    r.gradient[i] = a.value * b.gradient[i] + b.value * a.gradient[i];
    for (int k = i; k < a.n; ++k) {
      r.set_sym(i, k,
                a.value * b.hessian(i, k) + b.value * a.hessian(i, k) +
                    a.gradient[i] * b.gradient[k] + b.gradient[i] * a.gradient[k]);
    }
  }
  return r;
}

inline Jet2 chain(const Jet2& a, double f, double df, double d2f) {
  Jet2 r = Jet2::constant(a.n, f);
  for (int i = 0; i < a.n; ++i) {
    r.gradient[i] = df * a.gradient[i];
    for (int k = i; k < a.n; ++k)
      r.set_sym(i, k, df * a.hessian(i, k) + d2f * a.gradient[i] * a.gradient[k]);
  }
  return r;
}

// ---- uniform access used by the generic evaluator --------------------------

template <class T>
struct JetTraits;

template <>
struct JetTraits<double> {
  static double constant(int, double c) { return c; }
  static double variable(int, int, double v) { return v; }
  static double value(double x) { return x; }
};

template <>
struct JetTraits<Jet1> {
  static Jet1 constant(int n, double c) { return Jet1::constant(n, c); }
  static Jet1 variable(int n, int k, double v) { return Jet1::variable(n, k, v); }
  static double value(const Jet1& x) { return x.value; }
};

template <>
struct JetTraits<Jet2> {
  static Jet2 constant(int n, double c) { return Jet2::constant(n, c); }
  static Jet2 variable(int n, int k, double v) { return Jet2::variable(n, k, v); }
  static double value(const Jet2& x) { return x.value; }
};

inline double chain(double, double f, double, double) { return f; }

}  // namespace equiaffine

#endif  // EQUIAFFINE_JET_HPP
