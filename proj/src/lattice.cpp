#include "dgff/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

namespace dgff {

namespace {

constexpr double kGeomEps = 1e-9;

struct HalfEdgeType {
  LatticeSite to;  // relative to the source vertex's cell
  double angle;
};

LatticeSite offset(const LatticeSite& s, int di, int dj, int k) { return {s.i + di, s.j + dj, k}; }

// Outgoing half-edges of each cell vertex, sorted counterclockwise.
std::vector<std::vector<HalfEdgeType>> half_edge_types(const LatticeSpec& spec) {
  std::vector<std::vector<HalfEdgeType>> out(spec.cell_vertices.size());
  auto add = [&](int from, LatticeSite to) {
    const Complex d = spec.position(to) - spec.position({0, 0, from});
    auto& list = out[static_cast<std::size_t>(from)];
    for (const auto& h : list)
      if (h.to == to) return;
    list.push_back({to, std::atan2(d.imag(), d.real())});
  };
  for (const auto& e : spec.cell_edges) {
    add(e.from, {e.di, e.dj, e.to});
    add(e.to, {-e.di, -e.dj, e.from});
  }
  for (auto& list : out)
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });
  return out;
}

// Faces of the periodic graph up to translation, each listed counterclockwise.
std::vector<std::vector<LatticeSite>> trace_faces(const LatticeSpec& spec) {
  const auto types = half_edge_types(spec);
  std::set<std::vector<LatticeSite>> seen;
  std::vector<std::vector<LatticeSite>> faces;
  for (std::size_t k = 0; k < types.size(); ++k) {
    for (std::size_t h = 0; h < types[k].size(); ++h) {
      std::vector<LatticeSite> corners;
      LatticeSite a{0, 0, static_cast<int>(k)};
      LatticeSite b{types[k][h].to};
      const LatticeSite start_a = a;
      const LatticeSite start_b = b;
      bool closed = false;
      for (int guard = 0; guard < 64; ++guard) {
        corners.push_back(a);
        const auto& at_b = types[static_cast<std::size_t>(b.k)];
        const LatticeSite back{a.i - b.i, a.j - b.j, a.k};
        std::size_t back_idx = at_b.size();
        for (std::size_t q = 0; q < at_b.size(); ++q)
          if (at_b[q].to == back) back_idx = q;
        if (back_idx == at_b.size()) throw std::invalid_argument("lattice edges are not symmetric");
        const auto& next = at_b[(back_idx + at_b.size() - 1) % at_b.size()];
        const LatticeSite c = offset(b, next.to.i, next.to.j, next.to.k);
        a = b;
        b = c;
        if (a == start_a && b == start_b) {
          closed = true;
          break;
        }
      }
      if (!closed) continue;
      // Canonical key: translate the minimum corner into cell (0, 0).
      const LatticeSite lo = *std::min_element(corners.begin(), corners.end());
      std::vector<LatticeSite> key;
      for (const auto& c : corners) key.push_back({c.i - lo.i, c.j - lo.j, c.k});
      auto sorted = key;
      std::sort(sorted.begin(), sorted.end());
      if (!seen.insert(sorted).second) continue;
      double area2 = 0.0;
      for (std::size_t q = 0; q < key.size(); ++q) {
        const Complex p = spec.position(key[q]);
        const Complex r = spec.position(key[(q + 1) % key.size()]);
        area2 += p.real() * r.imag() - r.real() * p.imag();
      }
      if (area2 > kGeomEps) faces.push_back(std::move(key));
    }
  }
  return faces;
}

using WeightKey = std::tuple<int, int, int, int>;  // from, to, di, dj

std::map<WeightKey, double> weight_table(const LatticeSpec& spec) {
  std::map<WeightKey, double> table;
  for (const auto& e : spec.cell_edges) {
    table[{e.from, e.to, e.di, e.dj}] = e.weight;
    table[{e.to, e.from, -e.di, -e.dj}] = e.weight;
  }
  return table;
}

}  // namespace

void LatticeSpec::validate() const {
  const double cross = t1.real() * t2.imag() - t1.imag() * t2.real();
  if (std::abs(cross) < kGeomEps) throw std::invalid_argument("lattice basis is degenerate");
  if (cell_vertices.empty()) throw std::invalid_argument("lattice has no cell vertices");
  std::vector<bool> has_positive(cell_vertices.size(), false);
  for (const auto& e : cell_edges) {
    const auto n = static_cast<int>(cell_vertices.size());
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw std::invalid_argument("cell edge refers to a missing cell vertex");
    if (!(e.weight >= 0.0)) throw std::invalid_argument("edge weights must be nonnegative");
    if (e.weight > 0.0) {
      has_positive[static_cast<std::size_t>(e.from)] = true;
      has_positive[static_cast<std::size_t>(e.to)] = true;
    }
  }
  for (bool p : has_positive)
    if (!p) throw std::invalid_argument("every vertex needs a positive-weight edge");
}

LatticeSpec triangular_lattice() {
  LatticeSpec spec;
  spec.name = "tg";
  spec.t1 = {1.0, 0.0};
  spec.t2 = std::polar(1.0, std::numbers::pi / 3.0);
  spec.cell_vertices = {Complex{}};
  spec.cell_edges = {{0, 0, 1, 0, 1.0}, {0, 0, 0, 1, 1.0}, {0, 0, -1, 1, 1.0}};
  return spec;
}

LatticeSpec square_lattice() {
  LatticeSpec spec;
  spec.name = "square";
  spec.t1 = {1.0, 0.0};
  spec.t2 = {0.0, 1.0};
  spec.cell_vertices = {Complex{}};
  spec.cell_edges = {{0, 0, 1, 0, 1.0}, {0, 0, 0, 1, 1.0}};
  return spec;
}

LatticeSpec triangulate(const LatticeSpec& spec, DiagonalChoice choice) {
  spec.validate();
  const auto faces = trace_faces(spec);
  LatticeSpec out = spec;
  auto known = weight_table(spec);
  bool added = false;
  for (const auto& face : faces) {
    if (face.size() <= 3) continue;
    auto score = [&](const LatticeSite& s) {
      const Complex p = spec.position(s);
      return choice == DiagonalChoice::ne ? p.real() + p.imag() : p.imag() - p.real();
    };
    std::size_t pivot = 0;
    for (std::size_t q = 1; q < face.size(); ++q)
      if (score(face[q]) < score(face[pivot]) - kGeomEps) pivot = q;
    const LatticeSite& p = face[pivot];
    for (std::size_t step = 2; step + 1 < face.size(); ++step) {
      const LatticeSite& c = face[(pivot + step) % face.size()];
      const WeightKey key{p.k, c.k, c.i - p.i, c.j - p.j};
      if (known.contains(key)) continue;
      out.cell_edges.push_back({p.k, c.k, c.i - p.i, c.j - p.j, 0.0});
      known[key] = 0.0;
      known[{c.k, p.k, p.i - c.i, p.j - c.j}] = 0.0;
      added = true;
    }
  }
  if (added && spec.name == "square") out.name = choice == DiagonalChoice::ne ? "square-ne" : "square-nw";
  return out;
}

LatticeSpec lattice_by_name(std::string_view name) {
  if (name == "tg") return triangular_lattice();
  if (name == "square-ne") return triangulate(square_lattice(), DiagonalChoice::ne);
  if (name == "square-nw") return triangulate(square_lattice(), DiagonalChoice::nw);
  throw std::invalid_argument("unknown lattice '" + std::string(name) + "'");
}

std::vector<FaceType> triangle_faces(const LatticeSpec& spec) {
  std::vector<FaceType> out;
  for (const auto& face : trace_faces(spec)) {
    if (face.size() != 3)
      throw std::invalid_argument("lattice '" + spec.name + "' has a non-triangular face; triangulate it first");
    out.push_back({{face[0], face[1], face[2]}});
  }
  return out;
}

std::optional<VertexId> GridDomain::find(const LatticeSite& s) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  if (it == sites_.end() || *it != s) return std::nullopt;
  return static_cast<VertexId>(it - sites_.begin());
}

std::optional<EdgeId> GridDomain::find_edge(VertexId u, VertexId v) const {
  for (const auto& n : neighbors(u))
    if (n.vertex == v) return n.edge;
  return std::nullopt;
}

Complex GridDomain::face_center(FaceId f) const {
  const auto& t = faces_[static_cast<std::size_t>(f)];
  return (position(t[0]) + position(t[1]) + position(t[2])) / 3.0;
}

Complex GridDomain::boundary_edge_midpoint(std::size_t q) const {
  const std::size_t L = boundary_.size();
  return 0.5 * (position(boundary_[q % L]) + position(boundary_[(q + 1) % L]));
}

std::size_t GridDomain::nearest_boundary_edge(Complex p) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < boundary_.size(); ++q) {
    const double d = std::abs(boundary_edge_midpoint(q) - p);
    if (d < best_d - kGeomEps) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

std::vector<VertexId> GridDomain::arc_vertices(Arc a) const {
  std::vector<VertexId> out;
  for (VertexId v : boundary_)
    if (arcs_[idx(v)] == a) out.push_back(v);
  return out;
}

void GridDomain::assign_arcs() {
  const std::size_t L = boundary_.size();
  arcs_.assign(sites_.size(), Arc::none);
  for (std::size_t q = 0; q < L; ++q) arcs_[idx(boundary_[q])] = Arc::minus;
  for (std::size_t q = (x_split_ + 1) % L;; q = (q + 1) % L) {
    arcs_[idx(boundary_[q])] = Arc::plus;
    if (q == y_split_) break;
  }
}

std::vector<std::array<Complex, 2>> GridDomain::dual_cell(VertexId v) const {
  std::vector<std::array<Complex, 2>> out;
  for (const auto& n : neighbors(v)) {
    const Edge& e = edge(n.edge);
    const Complex mid = 0.5 * (position(e.u) + position(e.v));
    const Complex a = e.faces[0] == kNoFace ? mid : face_center(e.faces[0]);
    const Complex b = e.faces[1] == kNoFace ? mid : face_center(e.faces[1]);
    out.push_back({a, b});
  }
  return out;
}

std::vector<Complex> GridDomain::dual_cell_polygon(VertexId v) const {
  const Complex c = position(v);
  std::vector<Neighbor> ns(neighbors(v).begin(), neighbors(v).end());
  std::sort(ns.begin(), ns.end(), [&](const Neighbor& a, const Neighbor& b) {
    return std::arg(position(a.vertex) - c) < std::arg(position(b.vertex) - c);
  });
  std::vector<Complex> poly;
  for (std::size_t q = 0; q < ns.size(); ++q) {
    const Neighbor& a = ns[q];
    const Neighbor& b = ns[(q + 1) % ns.size()];
    // Face to the left of v->a contains b iff it is the wedge between them.
    const Edge& e = edge(a.edge);
    const FaceId left = e.u == v ? e.faces[0] : e.faces[1];
    bool wedge = false;
    if (left != kNoFace) {
      const auto& t = faces_[static_cast<std::size_t>(left)];
      wedge = std::find(t.begin(), t.end(), b.vertex) != t.end();
    }
    if (wedge) {
      poly.push_back(face_center(left));
    } else {
      poly.push_back(0.5 * (c + position(a.vertex)));
      poly.push_back(c);
      poly.push_back(0.5 * (c + position(b.vertex)));
    }
  }
  return poly;
}

namespace {

struct ShapeRegion {
  std::function<bool(const LatticeSite&, Complex)> contains;
  int i_lo, i_hi, j_lo, j_hi;
  Complex origin;
  Complex x_target, y_target;
};

ShapeRegion region_for(const LatticeSpec& spec, const Shape& shape) {
  const Complex t1 = spec.t1, t2 = spec.t2;
  const double det = t1.real() * t2.imag() - t1.imag() * t2.real();
  auto to_cell = [&](Complex p) {
    const double a = (p.real() * t2.imag() - p.imag() * t2.real()) / det;
    const double b = (t1.real() * p.imag() - t1.imag() * p.real()) / det;
    return std::pair{a, b};
  };
  auto box_range = [&](ShapeRegion& r, double x0, double x1, double y0, double y1) {
    double ilo = 1e300, ihi = -1e300, jlo = 1e300, jhi = -1e300;
    for (Complex p : {Complex{x0, y0}, Complex{x1, y0}, Complex{x0, y1}, Complex{x1, y1}}) {
      auto [a, b] = to_cell(p);
      ilo = std::min(ilo, a), ihi = std::max(ihi, a), jlo = std::min(jlo, b), jhi = std::max(jhi, b);
    }
    r.i_lo = static_cast<int>(std::floor(ilo)) - 2;
    r.i_hi = static_cast<int>(std::ceil(ihi)) + 2;
    r.j_lo = static_cast<int>(std::floor(jlo)) - 2;
    r.j_hi = static_cast<int>(std::ceil(jhi)) + 2;
  };

  ShapeRegion r;
  if (const auto* rh = std::get_if<Rhombus>(&shape)) {
    if (rh->m < 1 || rh->n < 1) throw std::invalid_argument("rhombus sides must be positive");
    const int m = rh->m, n = rh->n;
    r.contains = [m, n](const LatticeSite& s, Complex) { return s.i >= 0 && s.i <= m && s.j >= 0 && s.j <= n; };
    r.i_lo = -1, r.i_hi = m + 1, r.j_lo = -1, r.j_hi = n + 1;
    const double mid = std::floor((m - 1) / 2.0) + 0.5;
    r.x_target = mid * t1;
    r.y_target = mid * t1 + static_cast<double>(n) * t2;
  } else if (const auto* rc = std::get_if<Rectangle>(&shape)) {
    if (rc->m < 1 || rc->n < 1) throw std::invalid_argument("rectangle sides must be positive");
    const double w = rc->m, h = rc->n * std::abs(t2.imag());
    r.contains = [w, h](const LatticeSite&, Complex p) {
      return p.real() >= -kGeomEps && p.real() <= w + kGeomEps && p.imag() >= -kGeomEps && p.imag() <= h + kGeomEps;
    };
    box_range(r, 0.0, w, 0.0, h);
    r.x_target = {w / 2.0, 0.0};
    r.y_target = {w / 2.0, h};
  } else {
    const double R = std::get<HalfDisc>(shape).radius;
    if (!(R >= 0.0)) throw std::invalid_argument("half-disc radius must be nonnegative");
    Complex c = spec.position({0, 0, 0});
    for (const auto& e : spec.cell_edges)
      if (e.from == 0 && e.to == 0 && e.di == 1 && e.dj == 0 && e.weight > 0.0) c += 0.5 * t1;
    r.origin = c;
    r.contains = [c, R](const LatticeSite&, Complex p) {
      const Complex d = p - c;
      return std::abs(d) <= R + kGeomEps && d.imag() >= -kGeomEps;
    };
    box_range(r, c.real() - R, c.real() + R, c.imag(), c.imag() + R);
    r.x_target = c + Complex{0.0, R};
    r.y_target = c;
  }
  return r;
}

using Tri = std::array<LatticeSite, 3>;

// Keeps the largest edge-connected component of the triangle set.
std::vector<Tri> largest_component(const std::vector<Tri>& tris) {
  std::map<std::pair<LatticeSite, LatticeSite>, std::vector<std::size_t>> by_edge;
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int q = 0; q < 3; ++q) {
      auto a = tris[t][q], b = tris[t][(q + 1) % 3];
      if (b < a) std::swap(a, b);
      by_edge[{a, b}].push_back(t);
    }
  std::vector<int> comp(tris.size(), -1);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < tris.size(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    sizes.push_back(0);
    std::queue<std::size_t> q;
    q.push(s);
    comp[s] = id;
    while (!q.empty()) {
      const std::size_t t = q.front();
      q.pop();
      ++sizes.back();
      for (int k = 0; k < 3; ++k) {
        auto a = tris[t][k], b = tris[t][(k + 1) % 3];
        if (b < a) std::swap(a, b);
        for (std::size_t u : by_edge[{a, b}])
          if (comp[u] < 0) {
            comp[u] = id;
            q.push(u);
          }
      }
    }
  }
  if (sizes.empty()) return {};
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<Tri> out;
  for (std::size_t t = 0; t < tris.size(); ++t)
    if (comp[t] == best) out.push_back(tris[t]);
  return out;
}

// Finds a vertex where the boundary touches itself and removes every
// triangle at that vertex outside its largest fan. Returns false when the
// boundary is already free of pinch points.
bool repair_one_pinch(std::vector<Tri>& tris) {
  std::set<std::pair<LatticeSite, LatticeSite>> half;
  for (const auto& t : tris)
    for (int q = 0; q < 3; ++q) half.insert({t[q], t[(q + 1) % 3]});
  std::map<LatticeSite, int> out_degree;
  for (const auto& [a, b] : half)
    if (!half.contains({b, a})) ++out_degree[a];
  std::optional<LatticeSite> pinch;
  for (const auto& [v, d] : out_degree)
    if (d > 1) {
      pinch = v;
      break;
    }
  if (!pinch) return false;

  std::vector<std::size_t> at_v;
  for (std::size_t t = 0; t < tris.size(); ++t)
    if (std::find(tris[t].begin(), tris[t].end(), *pinch) != tris[t].end()) at_v.push_back(t);
  // Group the triangles at v into fans linked by shared edges through v.
  std::vector<int> fan(at_v.size(), -1);
  std::vector<std::size_t> fan_size;
  for (std::size_t s = 0; s < at_v.size(); ++s) {
    if (fan[s] >= 0) continue;
    const int id = static_cast<int>(fan_size.size());
    fan_size.push_back(0);
    std::vector<std::size_t> stack{s};
    fan[s] = id;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      ++fan_size.back();
      for (std::size_t b = 0; b < at_v.size(); ++b) {
        if (fan[b] >= 0) continue;
        int shared = 0;
        for (const auto& x : tris[at_v[a]])
          for (const auto& y : tris[at_v[b]]) shared += (x == y);
        if (shared == 2) {
          fan[b] = id;
          stack.push_back(b);
        }
      }
    }
  }
  const int keep = static_cast<int>(std::max_element(fan_size.begin(), fan_size.end()) - fan_size.begin());
  std::vector<bool> drop(tris.size(), false);
  for (std::size_t s = 0; s < at_v.size(); ++s)
    if (fan[s] != keep) drop[at_v[s]] = true;
  std::vector<Tri> kept;
  for (std::size_t t = 0; t < tris.size(); ++t)
    if (!drop[t]) kept.push_back(tris[t]);
  tris = std::move(kept);
  return true;
}

}  // namespace

DomainPtr build_domain(const LatticeSpec& spec, const Shape& shape) {
  spec.validate();
  const auto face_types = triangle_faces(spec);
  const ShapeRegion region = region_for(spec, shape);

  std::vector<Tri> tris;
  for (int ci = region.i_lo; ci <= region.i_hi; ++ci)
    for (int cj = region.j_lo; cj <= region.j_hi; ++cj)
      for (const auto& ft : face_types) {
        Tri t;
        bool inside = true;
        for (int q = 0; q < 3 && inside; ++q) {
          t[q] = offset(ft.corners[q], ci, cj, ft.corners[q].k);
          inside = region.contains(t[q], spec.position(t[q]));
        }
        if (inside) tris.push_back(t);
      }
  tris = largest_component(tris);
  while (repair_one_pinch(tris)) tris = largest_component(tris);
  if (tris.empty()) throw std::invalid_argument("degenerate shape: domain has no interior vertex");

  auto d = std::make_shared<GridDomain>();
  d->spec_ = spec;
  d->shape_ = shape;
  d->origin_ = region.origin;
  {
    std::set<LatticeSite> sites;
    for (const auto& t : tris) sites.insert(t.begin(), t.end());
    d->sites_.assign(sites.begin(), sites.end());
  }
  const std::size_t N = d->sites_.size();
  auto vid = [&](const LatticeSite& s) { return *d->find(s); };

  const auto weights = weight_table(spec);
  std::map<std::pair<VertexId, VertexId>, EdgeId> edge_index;
  for (const auto& t : tris) {
    const FaceId f = static_cast<FaceId>(d->faces_.size());
    std::array<VertexId, 3> tv{vid(t[0]), vid(t[1]), vid(t[2])};
    d->faces_.push_back(tv);
    for (int q = 0; q < 3; ++q) {
      const VertexId a = tv[q], b = tv[(q + 1) % 3];
      const auto key = std::minmax(a, b);
      auto it = edge_index.find(key);
      if (it == edge_index.end()) {
        const LatticeSite& sa = d->sites_[static_cast<std::size_t>(key.first)];
        const LatticeSite& sb = d->sites_[static_cast<std::size_t>(key.second)];
        const double w = weights.at({sa.k, sb.k, sb.i - sa.i, sb.j - sa.j});
        it = edge_index.emplace(key, static_cast<EdgeId>(d->edges_.size())).first;
        d->edges_.push_back({key.first, key.second, w});
      }
      auto& e = d->edges_[static_cast<std::size_t>(it->second)];
      // The triangle is counterclockwise, so it lies to the left of a->b.
      e.faces[a == e.u ? 0 : 1] = f;
    }
  }

  std::vector<std::vector<GridDomain::Neighbor>> adj(N);
  for (std::size_t e = 0; e < d->edges_.size(); ++e) {
    const auto& ed = d->edges_[e];
    adj[static_cast<std::size_t>(ed.u)].push_back({ed.v, ed.weight, static_cast<EdgeId>(e)});
    adj[static_cast<std::size_t>(ed.v)].push_back({ed.u, ed.weight, static_cast<EdgeId>(e)});
  }
  d->offsets_.assign(N + 1, 0);
  d->conductance_.assign(N, 0.0);
  for (std::size_t v = 0; v < N; ++v) {
    std::sort(adj[v].begin(), adj[v].end(), [](const auto& a, const auto& b) { return a.vertex < b.vertex; });
    d->offsets_[v + 1] = d->offsets_[v] + adj[v].size();
    for (const auto& n : adj[v]) {
      d->adjacency_.push_back(n);
      d->conductance_[v] += n.weight;
    }
  }

  // Boundary half-edges keep the domain on their left; follow them around.
  std::vector<VertexId> next(N, kNoVertex);
  std::vector<EdgeId> next_edge(N, -1);
  std::size_t boundary_half_edges = 0;
  for (std::size_t e = 0; e < d->edges_.size(); ++e) {
    const auto& ed = d->edges_[e];
    if (!ed.on_boundary()) continue;
    ++boundary_half_edges;
    const VertexId from = ed.faces[0] != kNoFace ? ed.u : ed.v;
    const VertexId to = ed.faces[0] != kNoFace ? ed.v : ed.u;
    next[static_cast<std::size_t>(from)] = to;
    next_edge[static_cast<std::size_t>(from)] = static_cast<EdgeId>(e);
  }
  VertexId start = kNoVertex;
  for (std::size_t v = 0; v < N && start == kNoVertex; ++v)
    if (next[v] != kNoVertex) start = static_cast<VertexId>(v);
  d->boundary_pos_.assign(N, -1);
  for (VertexId v = start;;) {
    if (d->boundary_pos_[static_cast<std::size_t>(v)] >= 0)
      throw std::invalid_argument("non-simple boundary");
    d->boundary_pos_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(d->boundary_.size());
    d->boundary_.push_back(v);
    d->boundary_edges_.push_back(next_edge[static_cast<std::size_t>(v)]);
    v = next[static_cast<std::size_t>(v)];
    if (v == kNoVertex) throw std::invalid_argument("non-simple boundary");
    if (v == start) break;
  }
  if (d->boundary_.size() != boundary_half_edges)
    throw std::invalid_argument("non-simple boundary: domain has holes");
  for (std::size_t v = 0; v < N; ++v)
    if (d->boundary_pos_[v] < 0) d->interior_.push_back(static_cast<VertexId>(v));
  if (d->interior_.empty()) throw std::invalid_argument("degenerate shape: domain has no interior vertex");

  d->x_split_ = d->nearest_boundary_edge(region.x_target);
  d->y_split_ = d->nearest_boundary_edge(region.y_target);
  if (d->x_split_ == d->y_split_) d->y_split_ = (d->x_split_ + d->boundary_.size() / 2) % d->boundary_.size();
  d->assign_arcs();
  return d;
}

DomainPtr split_boundary_edges(const DomainPtr& domain, std::size_t x_edge, std::size_t y_edge) {
  const std::size_t L = domain->boundary().size();
  if (x_edge >= L || y_edge >= L) throw std::invalid_argument("split edge index out of range");
  if (x_edge == y_edge) throw std::invalid_argument("split points must be distinct");
  auto d = std::make_shared<GridDomain>(*domain);
  d->x_split_ = x_edge;
  d->y_split_ = y_edge;
  d->assign_arcs();
  return d;
}

DomainPtr split_boundary(const DomainPtr& domain, Complex x, Complex y) {
  auto locate = [&](Complex p) {
    const std::size_t q = domain->nearest_boundary_edge(p);
    if (std::abs(domain->boundary_edge_midpoint(q) - p) > 1e-9)
      throw std::invalid_argument("split point is not the midpoint of a boundary edge");
    return q;
  };
  if (std::abs(x - y) < 1e-12) throw std::invalid_argument("split points must be distinct");
  return split_boundary_edges(domain, locate(x), locate(y));
}

void write_domain_csv(std::ostream& os, const GridDomain& domain) {
  os << "vertex_id,i,j,x,y,is_boundary,arc\n";
  const auto old = os.precision(17);
  for (std::size_t v = 0; v < domain.vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    const auto& s = domain.site(id);
    const Complex p = domain.position(id);
    const Arc a = domain.arc(id);
    os << v << ',' << s.i << ',' << s.j << ',' << p.real() << ',' << p.imag() << ','
       << (domain.is_boundary(id) ? 1 : 0) << ','
       << (a == Arc::plus ? "plus" : a == Arc::minus ? "minus" : "none") << '\n';
  }
  os.precision(old);
}

}  // namespace dgff
