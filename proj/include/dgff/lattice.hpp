#pragma once

#include <array>
#include <compare>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dgff/types.hpp"

namespace dgff {

/// Integer cell coordinates (i, j) plus the index k of the vertex inside the
/// fundamental cell.
struct LatticeSite {
  int i = 0;
  int j = 0;
  int k = 0;
  friend auto operator<=>(const LatticeSite&, const LatticeSite&) = default;
};

/// Undirected edge from vertex `from` of cell (i, j) to vertex `to` of cell
/// (i + di, j + dj). Zero weight marks an edge added only to triangulate.
struct CellEdge {
  int from = 0;
  int to = 0;
  int di = 0;
  int dj = 0;
  double weight = 1.0;
};

/// A weighted doubly periodic planar lattice.
struct LatticeSpec {
  std::string name;
  Complex t1{1.0, 0.0};
  Complex t2{0.0, 1.0};
  std::vector<Complex> cell_vertices{Complex{}};
  std::vector<CellEdge> cell_edges;

  [[nodiscard]] Complex position(const LatticeSite& s) const {
    return static_cast<double>(s.i) * t1 + static_cast<double>(s.j) * t2 +
           cell_vertices[static_cast<std::size_t>(s.k)];
  }

  /// Throws std::invalid_argument if the basis is degenerate, a weight is
  /// negative, or some vertex has no positive-weight edge.
  void validate() const;
};

/// A triangular face of the lattice, corners relative to cell (0, 0) and
/// listed counterclockwise.
struct FaceType {
  std::array<LatticeSite, 3> corners;
};

/// Unit triangular grid: basis {1, e^{i pi/3}}, six unit edges per vertex.
LatticeSpec triangular_lattice();

/// Unit square grid Z^2 (not triangulated).
LatticeSpec square_lattice();

enum class DiagonalChoice { ne, nw };

/// Adds zero-weight edges until every face is a triangle. Faces with more
/// than three corners are fanned from the corner that is extreme in the
/// chosen diagonal direction. Specs whose faces are all triangles are
/// returned unchanged.
LatticeSpec triangulate(const LatticeSpec& spec, DiagonalChoice choice = DiagonalChoice::ne);

/// "tg", "square-ne" or "square-nw".
LatticeSpec lattice_by_name(std::string_view name);

/// Triangular faces per fundamental cell. Throws if some face is not a
/// triangle.
std::vector<FaceType> triangle_faces(const LatticeSpec& spec);

struct Rhombus {
  int m = 0;
  int n = 0;
};
struct HalfDisc {
  double radius = 0.0;
};
struct Rectangle {
  int m = 0;
  int n = 0;
};
using Shape = std::variant<Rhombus, HalfDisc, Rectangle>;

enum class Arc : std::int8_t { none = 0, plus = 1, minus = -1 };

class GridDomain;
using DomainPtr = std::shared_ptr<const GridDomain>;

/// A lattice-polygon domain: union of closed lattice triangles whose
/// boundary is a simple closed lattice cycle, with the boundary split into
/// the counterclockwise arc from x_split to y_split (plus) and its
/// complement (minus).
class GridDomain {
 public:
  struct Neighbor {
    VertexId vertex;
    double weight;
    EdgeId edge;
  };
  struct Edge {
    VertexId u;
    VertexId v;
    double weight;
    // faces[0] lies to the left of u->v, faces[1] to the right.
    std::array<FaceId, 2> faces{kNoFace, kNoFace};
    [[nodiscard]] bool on_boundary() const { return faces[0] == kNoFace || faces[1] == kNoFace; }
  };

  [[nodiscard]] const LatticeSpec& spec() const { return spec_; }
  [[nodiscard]] const Shape& shape() const { return shape_; }
  /// Reference point of the shape: the half-disc center, or the origin.
  [[nodiscard]] Complex shape_origin() const { return origin_; }

  [[nodiscard]] std::size_t vertex_count() const { return sites_.size(); }
  [[nodiscard]] const LatticeSite& site(VertexId v) const { return sites_[idx(v)]; }
  [[nodiscard]] Complex position(VertexId v) const { return spec_.position(site(v)); }
  [[nodiscard]] bool is_boundary(VertexId v) const { return boundary_pos_[idx(v)] >= 0; }
  [[nodiscard]] Arc arc(VertexId v) const { return arcs_[idx(v)]; }
  [[nodiscard]] std::optional<VertexId> find(const LatticeSite& s) const;

  [[nodiscard]] std::span<const VertexId> interior() const { return interior_; }
  /// Boundary cycle, counterclockwise.
  [[nodiscard]] std::span<const VertexId> boundary() const { return boundary_; }
  [[nodiscard]] std::span<const Neighbor> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[idx(v)], adjacency_.data() + offsets_[idx(v) + 1]};
  }
  /// Sum of incident edge weights.
  [[nodiscard]] double conductance(VertexId v) const { return conductance_[idx(v)]; }

  [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
  [[nodiscard]] const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  [[nodiscard]] std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;
  /// Counterclockwise triangles of the domain.
  [[nodiscard]] std::span<const std::array<VertexId, 3>> faces() const { return faces_; }
  [[nodiscard]] Complex face_center(FaceId f) const;

  /// Boundary edge q joins boundary()[q] and boundary()[(q + 1) % L].
  [[nodiscard]] std::size_t x_split() const { return x_split_; }
  [[nodiscard]] std::size_t y_split() const { return y_split_; }
  [[nodiscard]] Complex boundary_edge_midpoint(std::size_t q) const;
  [[nodiscard]] EdgeId boundary_edge_id(std::size_t q) const { return boundary_edges_[q]; }
  [[nodiscard]] Complex x_point() const { return boundary_edge_midpoint(x_split_); }
  [[nodiscard]] Complex y_point() const { return boundary_edge_midpoint(y_split_); }
  /// Index of the boundary edge whose midpoint is nearest to p.
  [[nodiscard]] std::size_t nearest_boundary_edge(Complex p) const;

  [[nodiscard]] std::vector<VertexId> arc_vertices(Arc a) const;

  /// Dual hexagon (or deg-gon) of vertex v as its dual edges: each incident
  /// lattice edge contributes the segment joining the centers of the faces on
  /// its two sides; a boundary edge ends at its midpoint instead.
  [[nodiscard]] std::vector<std::array<Complex, 2>> dual_cell(VertexId v) const;
  /// Closed polygon of the dual cell, counterclockwise (for rendering).
  [[nodiscard]] std::vector<Complex> dual_cell_polygon(VertexId v) const;

  [[nodiscard]] bool is_triangular_grid() const { return spec_.name == "tg"; }

 private:
  friend DomainPtr build_domain(const LatticeSpec&, const Shape&);
  friend DomainPtr split_boundary(const DomainPtr&, Complex, Complex);
  friend DomainPtr split_boundary_edges(const DomainPtr&, std::size_t, std::size_t);

  static std::size_t idx(VertexId v) { return static_cast<std::size_t>(v); }
  void assign_arcs();

  LatticeSpec spec_;
  Shape shape_;
  Complex origin_{};
  std::vector<LatticeSite> sites_;  // sorted
  std::vector<std::int32_t> boundary_pos_;
  std::vector<Arc> arcs_;
  std::vector<VertexId> interior_;
  std::vector<VertexId> boundary_;
  std::vector<EdgeId> boundary_edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<double> conductance_;
  std::vector<Edge> edges_;
  std::vector<std::array<VertexId, 3>> faces_;
  std::size_t x_split_ = 0;
  std::size_t y_split_ = 0;
};

/// Builds the domain for a shape. Rhombus m x n: cells 0 <= i <= m,
/// 0 <= j <= n. Rectangle m x n: 0 <= x <= m and n rows. Half-disc radius R:
/// |v - c| <= R and Im(v - c) >= 0 with c the midpoint of the lattice edge
/// from (0,0) along t1; the boundary is simplified to a simple cycle.
/// Default split: rhombus and rectangle from the middle of the bottom side to
/// the middle of the top side, half-disc from the top of the arc to c.
DomainPtr build_domain(const LatticeSpec& spec, const Shape& shape);

/// Re-splits the boundary at two boundary-edge midpoints.
DomainPtr split_boundary(const DomainPtr& domain, Complex x, Complex y);
DomainPtr split_boundary_edges(const DomainPtr& domain, std::size_t x_edge, std::size_t y_edge);

/// CSV columns: vertex_id,i,j,x,y,is_boundary,arc
void write_domain_csv(std::ostream& os, const GridDomain& domain);

}  // namespace dgff
