#pragma once

// Centered boxes with Dirichlet boundary and fields on their interior nodes.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dualmp {

struct GridDomain {
  int dim = 3;
  std::array<double, 3> half_extent{0.5, 0.5, 0.5};
  std::array<int, 3> n{17, 17, 17};

  static GridDomain cube(int dim, int n, double half = 0.5) {
    GridDomain d;
    d.dim = dim;
    for (int i = 0; i < 3; ++i) {
      d.half_extent[i] = i < dim ? half : 1.0;
      d.n[i] = i < dim ? n : 1;
    }
    d.validate();
    return d;
  }

  void validate() const {
    if (dim != 2 && dim != 3) {
      throw std::invalid_argument("GridDomain: dim must be 2 or 3");
    }
    for (int i = 0; i < dim; ++i) {
      if (!(half_extent[i] > 0.0) || !std::isfinite(half_extent[i])) {
        throw std::invalid_argument("GridDomain: half extents must be positive");
      }
      if (n[i] < 8) {
        throw std::invalid_argument("GridDomain: at least 8 interior nodes per axis");
      }
    }
  }

  double length(int axis) const { return 2.0 * half_extent[axis]; }
  double h(int axis) const { return length(axis) / (n[axis] + 1); }

  /// Node counts with unused trailing axes set to 1.
  std::array<int, 3> shape() const {
    return {n[0], dim > 1 ? n[1] : 1, dim > 2 ? n[2] : 1};
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(n[i]);
    return s;
  }

  double cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= h(i);
    return v;
  }

  /// Coordinate of interior node index i (0-based) along axis.
  double coord(int axis, int i) const { return -half_extent[axis] + (i + 1) * h(axis); }

  std::size_t index(int i, int j, int k = 0) const {
    const auto s = shape();
    return (static_cast<std::size_t>(i) * s[1] + j) * s[2] + k;
  }

  bool operator==(const GridDomain& o) const {
    if (dim != o.dim) return false;
    for (int i = 0; i < dim; ++i) {
      if (n[i] != o.n[i] || half_extent[i] != o.half_extent[i]) return false;
    }
    return true;
  }
};

struct GridField {
  GridDomain domain;
  std::vector<double> values;

  GridField() = default;
  explicit GridField(const GridDomain& d, double fill = 0.0) : domain(d), values(d.size(), fill) {}
  GridField(const GridDomain& d, std::vector<double> v) : domain(d), values(std::move(v)) {
    if (values.size() != domain.size()) {
      throw std::invalid_argument("GridField: value count does not match domain");
    }
  }

  /// Samples fn(x, y, z) at the interior nodes.
  template <class F>
  static GridField sample(const GridDomain& d, const F& fn) {
    GridField out(d);
    const auto s = d.shape();
    for (int i = 0; i < s[0]; ++i) {
      const double x = d.coord(0, i);
      for (int j = 0; j < s[1]; ++j) {
        const double y = d.dim > 1 ? d.coord(1, j) : 0.0;
        for (int k = 0; k < s[2]; ++k) {
          const double z = d.dim > 2 ? d.coord(2, k) : 0.0;
          out.values[d.index(i, j, k)] = fn(x, y, z);
        }
      }
    }
    return out;
  }

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  template <class F>
  GridField map(const F& fn) const {
    GridField out;
    out.domain = domain;
    out.values.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = fn(values[i]);
    return out;
  }

  GridField& operator+=(const GridField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  GridField& operator-=(const GridField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }
  GridField& operator*=(double c) {
    for (double& v : values) v *= c;
    return *this;
  }
  /// this += c * o
  GridField& axpy(double c, const GridField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += c * o.values[i];
    return *this;
  }
};

inline GridField operator+(GridField a, const GridField& b) { return a += b; }
inline GridField operator-(GridField a, const GridField& b) { return a -= b; }
inline GridField operator*(double c, GridField a) { return a *= c; }

/// Node-volume rule: every interior node carries weight ∏h_i.
template <class T>
double integrate(const GridField& field, const T& transform) {
  double sum = 0.0;
  for (double v : field.values) sum += transform(v);
  if (!std::isfinite(sum)) {
    throw std::domain_error("integrate: non-finite intermediate");
  }
  return sum * field.domain.cell_volume();
}

inline double integrate(const GridField& field) {
  return integrate(field, [](double v) { return v; });
}

inline double inner(const GridField& a, const GridField& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) sum += a.values[i] * b.values[i];
  return sum * a.domain.cell_volume();
}

inline double lp_norm(const GridField& field, double r) {
  if (!(r >= 1.0)) {
    throw std::invalid_argument("lp_norm: r must be >= 1");
  }
  if (r == 2.0) {
    return std::sqrt(inner(field, field));
  }
  return std::pow(integrate(field, [r](double v) { return std::pow(std::abs(v), r); }), 1.0 / r);
}

inline double max_abs(const GridField& field) {
  double m = 0.0;
  for (double v : field.values) m = std::max(m, std::abs(v));
  return m;
}

struct Face {
  int axis = 0;
  int side = +1;  // +1 for x_axis = +L/2, -1 for x_axis = -L/2
};

inline std::vector<Face> faces(const GridDomain& d) {
  std::vector<Face> out;
  for (int a = 0; a < d.dim; ++a) {
    out.push_back({a, -1});
    out.push_back({a, +1});
  }
  return out;
}

/// Per-face outward normal derivative on the face's interior nodes (the
/// tangential index set of the remaining axes, row-major). Uses the zero
/// boundary value and the two nearest interior layers.
inline std::vector<double> boundary_normal_derivative(const GridField& field, Face face) {
  const GridDomain& d = field.domain;
  const int a = face.axis;
  if (d.n[a] < 2) {
    throw std::domain_error("boundary_normal_derivative: need two interior layers");
  }
  const double h = d.h(a);
  const auto s = d.shape();
  const int l1 = face.side > 0 ? s[a] - 1 : 0;
  const int l2 = face.side > 0 ? s[a] - 2 : 1;
  std::vector<double> out;
  std::array<int, 3> idx{0, 0, 0};
  std::array<int, 2> tang{};
  int t = 0;
  for (int ax = 0; ax < 3; ++ax) {
    if (ax != a) tang[t++] = ax;
  }
  out.reserve(static_cast<std::size_t>(s[tang[0]]) * s[tang[1]]);
  for (int i = 0; i < s[tang[0]]; ++i) {
    for (int j = 0; j < s[tang[1]]; ++j) {
      idx[tang[0]] = i;
      idx[tang[1]] = j;
      idx[a] = l1;
      const double u1 = field.values[d.index(idx[0], idx[1], idx[2])];
      idx[a] = l2;
      const double u2 = field.values[d.index(idx[0], idx[1], idx[2])];
      out.push_back(-(4.0 * u1 - u2) / (2.0 * h));
    }
  }
  return out;
}

}  // namespace dualmp
