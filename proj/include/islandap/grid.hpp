#pragma once

#include <cstddef>

#include "islandap/geometry.hpp"

namespace islandap {

/// Integer node coordinates; i in [-I, I], j in [-J, J], node (0, 0) at the origin.
struct NodeIndex {
  int i = 0;
  int j = 0;
  friend constexpr bool operator==(NodeIndex, NodeIndex) = default;
};

/// Uniform Cartesian grid on (-a, a) x (-b, b) with I, J cells on each side of the axes.
class Grid {
 public:
  Grid(double a, double b, int I, int J);

  double half_width() const { return a_; }
  double half_height() const { return b_; }
  int I() const { return I_; }
  int J() const { return J_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  int nx() const { return 2 * I_ + 1; }
  int ny() const { return 2 * J_ + 1; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(nx()) * static_cast<std::size_t>(ny());
  }

  Vec2 point(int i, int j) const { return {i * hx_, j * hy_}; }
  Vec2 point(NodeIndex n) const { return point(n.i, n.j); }

  /// Row-major in x: index = (j + J) * nx + (i + I).
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j + J_) * static_cast<std::size_t>(nx()) +
           static_cast<std::size_t>(i + I_);
  }
  std::size_t index(NodeIndex n) const { return index(n.i, n.j); }
  NodeIndex node(std::size_t idx) const {
    const int n = nx();
    return {static_cast<int>(idx % static_cast<std::size_t>(n)) - I_,
            static_cast<int>(idx / static_cast<std::size_t>(n)) - J_};
  }

  bool is_boundary(int i, int j) const { return i == -I_ || i == I_ || j == -J_ || j == J_; }
  bool is_boundary(NodeIndex n) const { return is_boundary(n.i, n.j); }

  /// Open-domain membership, shrunk by `margin`.
  bool contains(Vec2 p, double margin = 0.0) const {
    return std::abs(p.x) < a_ - margin && std::abs(p.y) < b_ - margin;
  }
  double perimeter() const { return 4.0 * (a_ + b_); }

 private:
  double a_;
  double b_;
  int I_;
  int J_;
  double hx_;
  double hy_;
};

/// Validates extents (> 0) and half-counts (>= 2); throws ErrorKind::InvalidConfig.
Grid build_grid(double a, double b, int I, int J);

}  // namespace islandap
