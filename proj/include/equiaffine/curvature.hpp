#ifndef EQUIAFFINE_CURVATURE_HPP
#define EQUIAFFINE_CURVATURE_HPP

// Curvature and Ricci tensors of a torsion-free connection.
//
// Index convention (used everywhere in the library):
//
//   R(∂_i, ∂_j) ∂_k = R^h_{kij} ∂_h
//   R^h_{kij} = ∂_i Γ^h_{jk} − ∂_j Γ^h_{ik} + Γ^h_{ia} Γ^a_{jk} − Γ^h_{ja} Γ^a_{ik}
//   Ric_{ij}  = Ric(∂_i, ∂_j) = trace(V ↦ R(∂_i, V) ∂_j) = R^a_{jia}

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "equiaffine/geometry.hpp"

namespace equiaffine {

/// R(h, k, i, j) = R^h_{kij}. Antisymmetric in (i, j) by construction.
struct CurvatureSample {
  Point point;
  Tensor4 R;
};

struct RicciSample {
  Point point;
  Tensor2 ric;
  double asym = 0.0;  // max_{i,j} |Ric_ij − Ric_ji|
};

inline Tensor4 riemann_tensor(const ConnectionJets& jets) {
  const Tensor3& G = jets.values;
  const Tensor4& dG = jets.gradients;
  const int n = G.dim();
  Tensor4 R(n);
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double v = dG(h, j, k, i) - dG(h, i, k, j);
          for (int a = 0; a < n; ++a) v += G(h, i, a) * G(a, j, k) - G(h, j, a) * G(a, i, k);
          R(h, k, i, j) = v;
          R(h, k, j, i) = -v;
        }
  return R;
}

inline Tensor2 ricci_tensor(const Tensor4& R) {
  const int n = R.dim();
  Tensor2 ric(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += R(a, j, i, a);
      ric(i, j) = s;
    }
  return ric;
}

inline double asymmetry(const Tensor2& m) {
  double worst = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i + 1; j < m.dim(); ++j) worst = std::max(worst, std::fabs(m(i, j) - m(j, i)));
  return worst;
}

inline CurvatureSample riemann(const ConnectionField& c, std::span<const double> p) {
  return {Point(p.begin(), p.end()), riemann_tensor(connection_jets(c, p))};
}

inline RicciSample ricci_from_jets(const ConnectionJets& jets, std::span<const double> p) {
  RicciSample s{Point(p.begin(), p.end()), ricci_tensor(riemann_tensor(jets)), 0.0};
  s.asym = asymmetry(s.ric);
  return s;
}

inline RicciSample ricci(const ConnectionField& c, std::span<const double> p) {
  return ricci_from_jets(connection_jets(c, p), p);
}

struct EquiaffinityReport {
  bool is_equiaffine = true;
  double max_asym = 0.0;
  Point worst_point;
};

/// Ricci symmetry test over a set of sample points.
inline EquiaffinityReport equiaffinity_report(const ConnectionField& c, std::span<const Point> points, double tol) {
  EquiaffinityReport r;
  for (const Point& p : points) {
    const RicciSample s = ricci(c, p);
    if (r.worst_point.empty() || s.asym > r.max_asym) {
      r.max_asym = s.asym;
      r.worst_point = p;
    }
  }
  r.is_equiaffine = r.max_asym <= tol;
  return r;
}

}  // namespace equiaffine

#endif  // EQUIAFFINE_CURVATURE_HPP
