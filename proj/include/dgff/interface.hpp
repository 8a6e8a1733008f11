#pragma once

#include <vector>

#include "dgff/harmonic.hpp"

namespace dgff {

/// Oriented path on the dual grid. Consecutive points are joined by dual
/// edges; each dual edge crosses one lattice edge of `edges`.
struct InterfacePath {
  DomainPtr domain;
  /// x_split midpoint, centers of the triangles crossed, y_split midpoint.
  std::vector<Complex> points;
  std::vector<FaceId> faces;
  /// Lattice edges crossed, starting with the x_split edge.
  std::vector<EdgeId> edges;
  /// Sorted vertex ids adjacent to the path on the positive (right) side and
  /// on the negative (left) side.
  std::vector<VertexId> right_vertices;
  std::vector<VertexId> left_vertices;

  friend bool operator==(const InterfacePath& a, const InterfacePath& b) {
    return a.edges == b.edges && a.faces == b.faces && a.right_vertices == b.right_vertices &&
           a.left_vertices == b.left_vertices;
  }
};

/// +1 or -1 for every vertex: boundary vertices by arc, interior vertices by
/// the sign of the field. Throws if an interior height is exactly zero.
std::vector<int> cell_signs(const Field& field);

/// Boundary between the positive cluster of the plus arc and the negative
/// cluster of the minus arc.
InterfacePath extract_interface(const Field& field);

/// Explores from x_split, turning left at positive cells and right at
/// negative ones, until it reaches y_split.
InterfacePath walk_interface_turn_rule(const Field& field);

struct ZeroArc {
  std::vector<Complex> points;
  std::vector<FaceId> faces;
  std::vector<EdgeId> edges;
  bool closed = false;
};

/// Sign-change arcs of a field with zero boundary values that start and end
/// on the boundary. Closed loops are appended (flagged) when requested.
std::vector<ZeroArc> extract_all_zero_interfaces(const Field& field, bool include_loops = false);

}  // namespace dgff
