#ifndef EQUIAFFINE_ERRORS_HPP
#define EQUIAFFINE_ERRORS_HPP

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace equiaffine {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is a 0-based character offset.
class ParseError : public Error {
public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at position " + std::to_string(position) + ": " + message),
        position_(position), detail_(message) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  std::size_t position_;
  std::string detail_;
};

namespace detail {
inline std::string format_point(const std::vector<double>& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t k = 0; k < p.size(); ++k) os << (k ? ", " : "") << p[k];
  os << ')';
  return os.str();
}
}  // namespace detail

/// Evaluation outside the domain of an elementary function (ln/sqrt of a
/// non-positive value, division by zero, ...). Carries the offending subtree
/// rendered as text and, once known, the evaluation point.
class DomainError : public Error {
public:
  DomainError(std::string subtree, const std::string& what)
      : Error(what + " in '" + subtree + "'"), subtree_(std::move(subtree)), reason_(what) {}

  DomainError(const DomainError& inner, std::vector<double> point)
      : Error(std::string(inner.what()) + " at " + detail::format_point(point)),
        subtree_(inner.subtree_), reason_(inner.reason_), point_(std::move(point)) {}

  const std::string& subtree() const noexcept { return subtree_; }
  const std::string& reason() const noexcept { return reason_; }
  const std::vector<double>& point() const noexcept { return point_; }

private:
  std::string subtree_;
  std::string reason_;
  std::vector<double> point_;
};

class SingularMetricError : public Error {
public:
  SingularMetricError(std::vector<double> point, double det)
      : Error("singular metric at " + detail::format_point(point) + " (det = " + to_text(det) + ")"),
        point_(std::move(point)), det_(det) {}

  const std::vector<double>& point() const noexcept { return point_; }
  double det() const noexcept { return det_; }

private:
  static std::string to_text(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }
  std::vector<double> point_;
  double det_;
};

/// Inconsistent sizes, points outside a chart, invalid chart bounds.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Malformed manifest document.
class ManifestError : public Error {
public:
  using Error::Error;
};

}  // namespace equiaffine

#endif  // EQUIAFFINE_ERRORS_HPP
