#ifndef EQUIAFFINE_PROJECTIVE_HPP
#define EQUIAFFINE_PROJECTIVE_HPP

// Projective (geodesic) change of a connection by a one-form ψ,
//
//   Γ̄^h_{ij} = Γ^h_{ij} + δ^h_i ψ_j + δ^h_j ψ_i,
//
// the canonical trace one-form
//
//   ψ_i = −1/(n+1) (Γ^a_{ia} − Γ̃^a_{ia}),   Γ̃ = Levi-Civita connection of g̃,
//
// which makes the Ricci tensor of Γ̄ symmetric, and pointwise checks of the
// curvature and Ricci transformation laws.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "equiaffine/curvature.hpp"
#include "equiaffine/geometry.hpp"

namespace equiaffine {

/// ψ_{ij} = ∇_j ψ_i − ψ_i ψ_j, covariant derivative taken with the source
/// connection. The bilinear form entering the curvature law is
/// ψ(∂_i, ∂_j) = psi_ij(j, i) = ∇_i ψ_j − ψ_i ψ_j; see psi_form().
struct PsiDeformationSample {
  Point point;
  Tensor2 psi_ij;

  /// ψ(∂_i, ∂_j): differentiated along the first argument.
  double psi_form(int i, int j) const { return psi_ij(j, i); }
};

struct EquiaffinizeResult {
  OneFormField psi;
  ConnectionField bar;
  std::string provenance;
};

/// Symbolic determinant of the metric coefficients, by cofactor expansion
/// with memoized minors.
inline Expression metric_determinant(const MetricField& m) {
  const int n = m.dim();
  // minor[mask] = determinant of rows (n - popcount(mask))..n-1 restricted
  // to the columns in mask.
  std::vector<Expression> minor(std::size_t{1} << n);
  minor[0] = Expression::constant(1.0);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int rows = __builtin_popcount(mask);
    const int row = n - rows;
    Expression acc;
    int sign_pos = 0;
    for (int col = 0; col < n; ++col) {
      if (!(mask & (1u << col))) continue;
      const Expression term = m(row, col) * minor[mask & ~(1u << col)];
      acc = (sign_pos % 2 == 0) ? acc + term : acc - term;
      ++sign_pos;
    }
    minor[mask] = acc;
  }
  return minor[(1u << n) - 1];
}

/// Contracted Christoffel symbols Γ̃^a_{ia} = ∂_i det g̃ / (2 det g̃) in closed form.
inline std::vector<Expression> levi_civita_trace(const MetricField& m) {
  const int n = m.dim();
  std::vector<Expression> tr(static_cast<std::size_t>(n));
  if (m.is_identity()) return tr;
  const Expression det = metric_determinant(m);
  for (int i = 0; i < n; ++i) tr[i] = differentiate(det, i) / (Expression::constant(2.0) * det);
  return tr;
}

/// Γ^a_{ia} in closed form.
inline std::vector<Expression> connection_trace(const ConnectionField& c) {
  const int n = c.dim();
  std::vector<Expression> tr(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) tr[i] = tr[i] + c(a, i, a);
  return tr;
}

inline OneFormField trace_one_form(const ConnectionField& c, const MetricField& m) {
  if (c.dim() != m.dim()) throw DimensionError("connection and metric dimensions differ");
  const int n = c.dim();
  const auto gamma_tr = connection_trace(c);
  const auto lc_tr = levi_civita_trace(m);
  const Expression factor = Expression::constant(-1.0 / (n + 1));
  OneFormField psi(c.chart());
  for (int i = 0; i < n; ++i) psi.set(i, factor * (gamma_tr[i] - lc_tr[i]));
  return psi;
}

inline ConnectionField apply_projective(const ConnectionField& c, const OneFormField& psi) {
  if (c.dim() != psi.dim()) throw DimensionError("connection and one-form dimensions differ");
  const int n = c.dim();
  ConnectionField bar(c.chart());
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Expression e = c(h, i, j);
        if (h == i) e = e + psi[j];
        if (h == j) e = e + psi[i];
        bar.set(h, i, j, e);
      }
  return bar;
}

inline PsiDeformationSample psi_deformation(const OneFormField& psi, const ConnectionField& c,
                                            std::span<const double> p) {
  const int n = c.dim();
  Tensor2 d = covariant_derivative_oneform(psi, c, p);
  std::vector<double> v(static_cast<std::size_t>(n));
  detail::at_point(p, [&] {
    for (int i = 0; i < n; ++i) v[i] = eval(psi[i], p);
    return 0;
  });
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) -= v[i] * v[j];
  return {Point(p.begin(), p.end()), std::move(d)};
}

/// Right-hand side of the curvature law,
/// R̄(X,Y)Z = R(X,Y)Z + (ψ(X,Y) − ψ(Y,X)) Z + ψ(X,Z) Y − ψ(Y,Z) X,
/// in components (h, k, i, j) with X = ∂_i, Y = ∂_j, Z = ∂_k.
inline Tensor4 transformed_curvature(const Tensor4& R, const PsiDeformationSample& s) {
  const int n = R.dim();
  Tensor4 out = R;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          if (h == k) v += s.psi_form(i, j) - s.psi_form(j, i);
          if (h == j) v += s.psi_form(i, k);
          if (h == i) v -= s.psi_form(j, k);
          out(h, k, i, j) += v;
        }
  return out;
}

/// Right-hand side of the Ricci law, R̄ic(X,Y) = Ric(X,Y) + n ψ(X,Y) − ψ(Y,X).
inline Tensor2 transformed_ricci(const Tensor2& ric, const PsiDeformationSample& s) {
  const int n = ric.dim();
  Tensor2 out = ric;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) += n * s.psi_form(i, j) - s.psi_form(j, i);
  return out;
}

/// Max-norm residual of the curvature law, with R̄ computed directly from
/// the transformed connection.
inline double verify_curvature_relation(const ConnectionField& c, const EquiaffinizeResult& r,
                                        std::span<const double> p) {
  const Tensor4 R = riemann(c, p).R;
  const Tensor4 Rbar = riemann(r.bar, p).R;
  return (Rbar - transformed_curvature(R, psi_deformation(r.psi, c, p))).max_abs();
}

inline double verify_ricci_relation(const ConnectionField& c, const EquiaffinizeResult& r,
                                    std::span<const double> p) {
  const Tensor2 ric = ricci(c, p).ric;
  const Tensor2 ric_bar = ricci(r.bar, p).ric;
  return (ric_bar - transformed_ricci(ric, psi_deformation(r.psi, c, p))).max_abs();
}

/// The projectively equivalent equiaffine connection. When `validation` is
/// non-empty the metric must be invertible at each of those points.
inline EquiaffinizeResult equiaffinize(const ConnectionField& c, const MetricField& m,
                                       std::span<const Point> validation = {}, std::string provenance = {}) {
  for (const Point& p : validation) metric_inverse(m, p);
  OneFormField psi = trace_one_form(c, m);
  ConnectionField bar = apply_projective(c, psi);
  return {std::move(psi), std::move(bar), std::move(provenance)};
}

/// max_i |Γ̄^a_{ia} − Γ̃^a_{ia}| at p, with Γ̃ evaluated numerically.
inline double trace_normalization_residual(const ConnectionField& bar, const MetricField& m,
                                           std::span<const double> p) {
  const int n = bar.dim();
  const Tensor3 g = connection_values(bar, p);
  const Tensor3 lc = levi_civita(m, p).values;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += g(a, i, a) - lc(a, i, a);
    worst = std::max(worst, std::fabs(s));
  }
  return worst;
}

struct IdempotenceResidual {
  double psi = 0.0;         // max |ψ'_i| of the second application
  double connection = 0.0;  // max |Γ̄' − Γ̄|
};

/// Applies the construction a second time and measures how far it moves.
inline IdempotenceResidual idempotence_residual(const EquiaffinizeResult& r, const MetricField& m,
                                                std::span<const Point> points) {
  const EquiaffinizeResult again = equiaffinize(r.bar, m);
  const int n = r.bar.dim();
  IdempotenceResidual out;
  for (const Point& p : points) {
    detail::at_point(p, [&] {
      for (int i = 0; i < n; ++i) out.psi = std::max(out.psi, std::fabs(eval(again.psi[i], p)));
      return 0;
    });
    const Tensor3 a = connection_values(r.bar, p);
    const Tensor3 b = connection_values(again.bar, p);
    out.connection = std::max(out.connection, (a - b).max_abs());
  }
  return out;
}

}  // namespace equiaffine

#endif  // EQUIAFFINE_PROJECTIVE_HPP
