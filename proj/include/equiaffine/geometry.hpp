#ifndef EQUIAFFINE_GEOMETRY_HPP
#define EQUIAFFINE_GEOMETRY_HPP

// Chart-level data model: a rectangular coordinate chart and the coefficient
// fields living on it (affine connection, metric, one-form), together with
// their pointwise evaluation.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "equiaffine/errors.hpp"
#include "equiaffine/expr.hpp"
#include "equiaffine/tensor.hpp"

namespace equiaffine {

using Point = std::vector<double>;

/// Determinants at or below this magnitude are treated as singular.
inline constexpr double kSingularDeterminant = 1e-12;

class Chart {
public:
  Chart(int n, std::vector<double> lo, std::vector<double> hi, std::vector<std::string> names = {})
      : n_(n), lo_(std::move(lo)), hi_(std::move(hi)), names_(std::move(names)) {
    if (n_ < 2 || n_ > kMaxDimension)
      throw DimensionError("chart dimension must lie in [2, " + std::to_string(kMaxDimension) + "], got " +
                           std::to_string(n_));
    if (names_.empty()) names_ = default_coordinate_names(n_);
    if (static_cast<int>(lo_.size()) != n_ || static_cast<int>(hi_.size()) != n_ ||
        static_cast<int>(names_.size()) != n_)
      throw DimensionError("chart bounds and names must have one entry per coordinate");
    for (int k = 0; k < n_; ++k) {
      if (!(lo_[k] < hi_[k]))
        throw DimensionError("chart bounds require lo < hi for coordinate " + names_[k]);
      for (int j = 0; j < k; ++j)
        if (names_[j] == names_[k]) throw DimensionError("duplicate coordinate name '" + names_[k] + "'");
    }
  }

  /// The box [lo, hi]^n with default coordinate names.
  static Chart cube(int n, double lo, double hi) {
    return Chart(n, std::vector<double>(n, lo), std::vector<double>(n, hi));
  }

  int dim() const { return n_; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  const std::vector<std::string>& names() const { return names_; }

  bool contains(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != n_) return false;
    for (int k = 0; k < n_; ++k)
      if (!(p[k] >= lo_[k] && p[k] <= hi_[k])) return false;
    return true;
  }

  void require_inside(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != n_)
      throw DimensionError("point has " + std::to_string(p.size()) + " coordinates, chart has " + std::to_string(n_));
    if (!contains(p)) throw DimensionError("point " + detail::format_point(Point(p.begin(), p.end())) + " lies outside the chart");
  }

  Expression parse(std::string_view text) const { return equiaffine::parse(text, names_); }
  std::string render(const Expression& e) const { return to_string(e, names_); }

private:
  int n_;
  std::vector<double> lo_, hi_;
  std::vector<std::string> names_;
};

namespace detail {
inline std::size_t pair_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // Row-major upper triangle.
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

inline void check_expression(const Chart& chart, const Expression& e, const char* what) {
  if (max_variable_index(e.node()) >= chart.dim())
    throw DimensionError(std::string(what) + " references a coordinate outside the chart");
}

/// Runs `fn`, attaching `p` to any domain error it raises.
template <class F>
auto at_point(std::span<const double> p, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DomainError& e) {
    if (!e.point().empty()) throw;
    throw DomainError(e, Point(p.begin(), p.end()));
  }
}
}  // namespace detail

/// Torsion-free affine connection: coefficients Γ^h_{ij}. Only the (i ≤ j)
/// representative is stored, so Γ^h_{ij} and Γ^h_{ji} are the same object.
class ConnectionField {
public:
  /// The flat connection (all coefficients 0).
  explicit ConnectionField(Chart chart)
      : chart_(std::move(chart)),
        pairs_(static_cast<std::size_t>(chart_.dim() * (chart_.dim() + 1) / 2)),
        gamma_(static_cast<std::size_t>(chart_.dim()) * pairs_) {}

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }

  const Expression& operator()(int h, int i, int j) const { return gamma_[slot(h, i, j)]; }

  void set(int h, int i, int j, Expression e) {
    detail::check_expression(chart_, e, "connection coefficient");
    gamma_[slot(h, i, j)] = std::move(e);
  }

private:
  std::size_t slot(int h, int i, int j) const {
    return static_cast<std::size_t>(h) * pairs_ + detail::pair_index(chart_.dim(), i, j);
  }

  Chart chart_;
  std::size_t pairs_;
  std::vector<Expression> gamma_;
};

/// Symmetric metric g_{ij}, stored once per unordered index pair.
class MetricField {
public:
  explicit MetricField(Chart chart)
      : chart_(std::move(chart)), g_(static_cast<std::size_t>(chart_.dim() * (chart_.dim() + 1) / 2)) {}

  static MetricField identity(const Chart& chart) {
    MetricField m(chart);
    for (int i = 0; i < chart.dim(); ++i) m.set(i, i, Expression::constant(1.0));
    return m;
  }

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }

  const Expression& operator()(int i, int j) const { return g_[detail::pair_index(chart_.dim(), i, j)]; }

  void set(int i, int j, Expression e) {
    detail::check_expression(chart_, e, "metric coefficient");
    g_[detail::pair_index(chart_.dim(), i, j)] = std::move(e);
  }

  bool is_identity() const {
    for (int i = 0; i < dim(); ++i)
      for (int j = i; j < dim(); ++j)
        if (!(*this)(i, j).is_constant(i == j ? 1.0 : 0.0)) return false;
    return true;
  }

private:
  Chart chart_;
  std::vector<Expression> g_;
};

/// Covector field ψ_i.
class OneFormField {
public:
  explicit OneFormField(Chart chart) : chart_(std::move(chart)), psi_(static_cast<std::size_t>(chart_.dim())) {}

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }

  const Expression& operator[](int i) const { return psi_[static_cast<std::size_t>(i)]; }

  void set(int i, Expression e) {
    detail::check_expression(chart_, e, "one-form component");
    psi_[static_cast<std::size_t>(i)] = std::move(e);
  }

private:
  Chart chart_;
  std::vector<Expression> psi_;
};

/// A tensor field sampled at one point.
template <class T>
struct PointSample {
  Point point;
  T values;
};

/// Connection coefficients and their first partials at a point:
/// values(h,i,j) = Γ^h_{ij}, gradients(h,i,j,k) = ∂_k Γ^h_{ij}.
struct ConnectionJets {
  Tensor3 values;
  Tensor4 gradients;
};

inline Tensor3 connection_values(const ConnectionField& c, std::span<const double> p) {
  const int n = c.dim();
  Tensor3 v(n);
  detail::at_point(p, [&] {
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const double x = eval(c(h, i, j), p);
          v(h, i, j) = x;
          v(h, j, i) = x;
        }
    return 0;
  });
  return v;
}

inline ConnectionJets connection_jets(const ConnectionField& c, std::span<const double> p) {
  c.chart().require_inside(p);
  const int n = c.dim();
  ConnectionJets out{Tensor3(n), Tensor4(n)};
  detail::at_point(p, [&] {
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const Jet1 jet = eval_jet1(c(h, i, j), p);
          out.values(h, i, j) = jet.value;
          out.values(h, j, i) = jet.value;
          for (int k = 0; k < n; ++k) {
            out.gradients(h, i, j, k) = jet.gradient[k];
            out.gradients(h, j, i, k) = jet.gradient[k];
          }
        }
    return 0;
  });
  return out;
}

inline Tensor2 metric_values(const MetricField& m, std::span<const double> p) {
  const int n = m.dim();
  Tensor2 g(n);
  detail::at_point(p, [&] {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g(i, j) = g(j, i) = eval(m(i, j), p);
    return 0;
  });
  return g;
}

namespace detail {
/// Inverse of a symmetric matrix, rejecting |det| <= kSingularDeterminant.
inline Tensor2 invert(const Tensor2& g, std::span<const double> p) {
  const int n = g.dim();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(i, j);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double det = lu.determinant();
  if (!(std::fabs(det) > kSingularDeterminant)) throw SingularMetricError(Point(p.begin(), p.end()), det);
  const Eigen::MatrixXd inv = lu.inverse();
  Tensor2 out(n);
  // Symmetrize.
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out(i, j) = out(j, i) = 0.5 * (inv(i, j) + inv(j, i));
  return out;
}
}  // namespace detail

/// g^{ij} at `p`. Throws SingularMetricError when |det g| <= 1e-12.
inline Tensor2 metric_inverse(const MetricField& m, std::span<const double> p) {
  m.chart().require_inside(p);
  return detail::invert(metric_values(m, p), p);
}

/// Christoffel symbols of the metric and their first partials:
/// Γ^h_{ij} = ½ g^{ha}(∂_i g_{aj} + ∂_j g_{ai} − ∂_a g_{ij}).
inline ConnectionJets levi_civita(const MetricField& m, std::span<const double> p) {
  m.chart().require_inside(p);
  const int n = m.dim();

  // g, ∂g and ∂∂g from second-order jets.
  Tensor2 g(n);
  Tensor3 dg(n);   // dg(i,j,k) = ∂_k g_ij
  Tensor4 ddg(n);  // ddg(i,j,k,l) = ∂_k ∂_l g_ij
  detail::at_point(p, [&] {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const Jet2 jet = eval_jet2(m(i, j), p);
        g(i, j) = g(j, i) = jet.value;
        for (int k = 0; k < n; ++k) {
          dg(i, j, k) = dg(j, i, k) = jet.gradient[k];
          for (int l = 0; l < n; ++l) ddg(i, j, k, l) = ddg(j, i, k, l) = jet.hessian(k, l);
        }
      }
    return 0;
  });
  const Tensor2 ginv = detail::invert(g, p);

  // Christoffel symbols of the first kind, lowered index first, and partials.
  Tensor3 first(n);   // first(a,i,j) = Γ_{a,ij}
  Tensor4 dfirst(n);  // dfirst(a,i,j,k) = ∂_k Γ_{a,ij}
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        first(a, i, j) = 0.5 * (dg(a, j, i) + dg(a, i, j) - dg(i, j, a));
        for (int k = 0; k < n; ++k)
          dfirst(a, i, j, k) = 0.5 * (ddg(a, j, i, k) + ddg(a, i, j, k) - ddg(i, j, a, k));
      }

  // ∂_k g^{ha} = −g^{hb} ∂_k g_{bc} g^{ca}
  Tensor3 dginv(n);  // dginv(h,a,k)
  for (int h = 0; h < n; ++h)
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) s += ginv(h, b) * dg(b, c, k) * ginv(c, a);
        dginv(h, a, k) = -s;
      }

  ConnectionJets out{Tensor3(n), Tensor4(n)};
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = 0.0;
        for (int a = 0; a < n; ++a) v += ginv(h, a) * first(a, i, j);
        out.values(h, i, j) = out.values(h, j, i) = v;
        for (int k = 0; k < n; ++k) {
          double d = 0.0;
          for (int a = 0; a < n; ++a) d += dginv(h, a, k) * first(a, i, j) + ginv(h, a) * dfirst(a, i, j, k);
          out.gradients(h, i, j, k) = out.gradients(h, j, i, k) = d;
        }
      }
  return out;
}

/// ∇_j ψ_i = ∂_j ψ_i − Γ^a_{ij} ψ_a, returned as D(i, j).
inline Tensor2 covariant_derivative_oneform(const OneFormField& psi, const ConnectionField& c,
                                            std::span<const double> p) {
  if (psi.dim() != c.dim()) throw DimensionError("one-form and connection dimensions differ");
  c.chart().require_inside(p);
  const int n = c.dim();
  const Tensor3 gamma = connection_values(c, p);
  std::vector<Jet1> jets(static_cast<std::size_t>(n));
  detail::at_point(p, [&] {
    for (int i = 0; i < n; ++i) jets[i] = eval_jet1(psi[i], p);
    return 0;
  });
  Tensor2 d(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = jets[i].gradient[j];
      for (int a = 0; a < n; ++a) s -= gamma(a, i, j) * jets[a].value;
      d(i, j) = s;
    }
  return d;
}

/// ∇_k g_{ij} = ∂_k g_{ij} − Γ^a_{ki} g_{aj} − Γ^a_{kj} g_{ia}, returned as (k, i, j).
inline Tensor3 metric_covariant_derivative(const MetricField& m, const Tensor3& gamma, std::span<const double> p) {
  const int n = m.dim();
  Tensor2 g(n);
  Tensor3 dg(n);
  detail::at_point(p, [&] {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const Jet1 jet = eval_jet1(m(i, j), p);
        g(i, j) = g(j, i) = jet.value;
        for (int k = 0; k < n; ++k) dg(i, j, k) = dg(j, i, k) = jet.gradient[k];
      }
    return 0;
  });
  Tensor3 out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = dg(i, j, k);
        for (int a = 0; a < n; ++a) s -= gamma(a, k, i) * g(a, j) + gamma(a, k, j) * g(i, a);
        out(k, i, j) = s;
      }
  return out;
}

}  // namespace equiaffine

#endif  // EQUIAFFINE_GEOMETRY_HPP
