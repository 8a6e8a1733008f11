#include "dgff/interface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dgff {

namespace {

VertexId third_vertex(const std::array<VertexId, 3>& t, VertexId a, VertexId b) {
  for (VertexId v : t)
    if (v != a && v != b) return v;
  throw std::logic_error("degenerate triangle");
}

FaceId across(const GridDomain::Edge& e, FaceId f) { return e.faces[0] == f ? e.faces[1] : e.faces[0]; }

InterfacePath assemble(const Field& field, const std::vector<int>& sign, std::vector<EdgeId> edges,
                       std::vector<FaceId> faces) {
  const GridDomain& d = *field.domain;
  InterfacePath out;
  out.domain = field.domain;
  out.points.push_back(d.x_point());
  for (FaceId f : faces) out.points.push_back(d.face_center(f));
  out.points.push_back(d.y_point());
  for (EdgeId e : edges) {
    const auto& ed = d.edge(e);
    const VertexId pos = sign[static_cast<std::size_t>(ed.u)] > 0 ? ed.u : ed.v;
    const VertexId neg = pos == ed.u ? ed.v : ed.u;
    out.right_vertices.push_back(pos);
    out.left_vertices.push_back(neg);
  }
  for (auto* s : {&out.right_vertices, &out.left_vertices}) {
    std::sort(s->begin(), s->end());
    s->erase(std::unique(s->begin(), s->end()), s->end());
  }
  out.edges = std::move(edges);
  out.faces = std::move(faces);
  return out;
}

FaceId only_face(const GridDomain::Edge& e) { return e.faces[0] != kNoFace ? e.faces[0] : e.faces[1]; }

}  // namespace

std::vector<int> cell_signs(const Field& field) {
  const GridDomain& d = *field.domain;
  if (field.size() != d.vertex_count()) throw std::invalid_argument("field does not match the domain");
  std::vector<int> sign(d.vertex_count(), 0);
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    if (d.is_boundary(id)) {
      sign[v] = d.arc(id) == Arc::plus ? 1 : -1;
    } else {
      const double h = field.values[v];
      if (!(h > 0.0) && !(h < 0.0))
        throw std::invalid_argument("interior height is zero or undefined at vertex " + std::to_string(v));
      sign[v] = h > 0.0 ? 1 : -1;
    }
  }
  return sign;
}

InterfacePath walk_interface_turn_rule(const Field& field) {
  const GridDomain& d = *field.domain;
  const auto sign = cell_signs(field);
  const EdgeId start = d.boundary_edge_id(d.x_split());
  const EdgeId goal = d.boundary_edge_id(d.y_split());
  std::vector<EdgeId> edges{start};
  std::vector<FaceId> faces;
  const auto& e0 = d.edge(start);
  VertexId p = sign[static_cast<std::size_t>(e0.u)] > 0 ? e0.u : e0.v;
  VertexId n = p == e0.u ? e0.v : e0.u;
  FaceId f = only_face(e0);
  for (std::size_t guard = 0; guard <= d.faces().size(); ++guard) {
    faces.push_back(f);
    const VertexId w = third_vertex(d.faces()[static_cast<std::size_t>(f)], p, n);
    EdgeId exit;
    if (sign[static_cast<std::size_t>(w)] > 0) {
      exit = *d.find_edge(w, n);
      p = w;
    } else {
      exit = *d.find_edge(p, w);
      n = w;
    }
    edges.push_back(exit);
    const auto& ex = d.edge(exit);
    if (ex.on_boundary()) {
      if (exit != goal) throw std::logic_error("interface walker left the domain away from y_split");
      return assemble(field, sign, std::move(edges), std::move(faces));
    }
    f = across(ex, f);
  }
  throw std::logic_error("interface walker did not terminate");
}

InterfacePath extract_interface(const Field& field) {
  const GridDomain& d = *field.domain;
  const auto sign = cell_signs(field);
  const std::size_t N = d.vertex_count();
  // cluster[v] = +1 for the positive cluster of the plus arc, -1 for the
  // negative cluster of the minus arc.
  std::vector<int> cluster(N, 0);
  for (int s : {1, -1}) {
    std::vector<VertexId> stack;
    for (VertexId v : d.boundary())
      if (sign[static_cast<std::size_t>(v)] == s) {
        cluster[static_cast<std::size_t>(v)] = s;
        stack.push_back(v);
      }
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (const auto& nb : d.neighbors(v)) {
        auto& c = cluster[static_cast<std::size_t>(nb.vertex)];
        if (c == 0 && sign[static_cast<std::size_t>(nb.vertex)] == s) {
          c = s;
          stack.push_back(nb.vertex);
        }
      }
    }
  }
  std::vector<char> on_gamma(d.edges().size(), 0);
  std::size_t count = 0;
  for (std::size_t e = 0; e < d.edges().size(); ++e) {
    const auto& ed = d.edge(static_cast<EdgeId>(e));
    if (cluster[static_cast<std::size_t>(ed.u)] * cluster[static_cast<std::size_t>(ed.v)] < 0) {
      on_gamma[e] = 1;
      ++count;
    }
  }
  const EdgeId start = d.boundary_edge_id(d.x_split());
  const EdgeId goal = d.boundary_edge_id(d.y_split());
  if (!on_gamma[static_cast<std::size_t>(start)] || !on_gamma[static_cast<std::size_t>(goal)])
    throw std::logic_error("split edges do not separate the clusters");

  std::vector<EdgeId> edges{start};
  std::vector<FaceId> faces;
  EdgeId e = start;
  FaceId f = only_face(d.edge(start));
  while (true) {
    faces.push_back(f);
    const auto& t = d.faces()[static_cast<std::size_t>(f)];
    EdgeId next = -1;
    for (int q = 0; q < 3; ++q) {
      const EdgeId c = *d.find_edge(t[q], t[(q + 1) % 3]);
      if (c != e && on_gamma[static_cast<std::size_t>(c)]) {
        if (next >= 0) throw std::logic_error("interface branches inside a triangle");
        next = c;
      }
    }
    if (next < 0) throw std::logic_error("interface ends inside the domain");
    edges.push_back(next);
    if (d.edge(next).on_boundary()) break;
    e = next;
    f = across(d.edge(next), f);
    if (faces.size() > d.faces().size()) throw std::logic_error("interface does not terminate");
  }
  if (edges.back() != goal) throw std::logic_error("interface ends away from y_split");
  if (edges.size() != count) throw std::logic_error("cluster boundary is not a single path");
  return assemble(field, sign, std::move(edges), std::move(faces));
}

std::vector<ZeroArc> extract_all_zero_interfaces(const Field& field, bool include_loops) {
  const GridDomain& d = *field.domain;
  for (VertexId v : d.boundary())
    if (field[v] != 0.0) throw std::invalid_argument("boundary values must be identically zero");
  std::vector<int> sign(d.vertex_count(), 0);
  for (VertexId v : d.interior()) {
    const double h = field[v];
    if (!(h > 0.0) && !(h < 0.0))
      throw std::invalid_argument("interior height is zero or undefined at vertex " + std::to_string(v));
    sign[static_cast<std::size_t>(v)] = h > 0.0 ? 1 : -1;
  }
  auto changes = [&](EdgeId e) {
    const auto& ed = d.edge(e);
    return sign[static_cast<std::size_t>(ed.u)] * sign[static_cast<std::size_t>(ed.v)] < 0;
  };
  const auto F = d.faces().size();
  std::vector<std::vector<EdgeId>> face_changes(F);
  std::vector<VertexId> lone_boundary(F, kNoVertex);
  for (std::size_t f = 0; f < F; ++f) {
    const auto& t = d.faces()[f];
    int nb = 0;
    for (VertexId v : t)
      if (d.is_boundary(v)) {
        ++nb;
        lone_boundary[f] = v;
      }
    if (nb != 1) lone_boundary[f] = kNoVertex;
    for (int q = 0; q < 3; ++q) {
      const EdgeId e = *d.find_edge(t[q], t[(q + 1) % 3]);
      if (changes(e)) face_changes[f].push_back(e);
    }
  }
  std::vector<char> used(F, 0);
  std::vector<ZeroArc> arcs;
  auto trace = [&](FaceId f, EdgeId e, ZeroArc& arc) {
    // Follows sign-change edges from face f leaving through e.
    while (true) {
      arc.edges.push_back(e);
      const FaceId g = across(d.edge(e), f);
      if (used[static_cast<std::size_t>(g)]) return g;
      used[static_cast<std::size_t>(g)] = 1;
      arc.faces.push_back(g);
      arc.points.push_back(d.face_center(g));
      const auto& ch = face_changes[static_cast<std::size_t>(g)];
      if (ch.size() == 1) return g;
      e = ch[0] == e ? ch[1] : ch[0];
      f = g;
    }
  };
  for (std::size_t f = 0; f < F; ++f) {
    if (used[f] || face_changes[f].size() != 1) continue;
    const auto fid = static_cast<FaceId>(f);
    ZeroArc arc;
    used[f] = 1;
    arc.points.push_back(d.position(lone_boundary[f]));
    arc.points.push_back(d.face_center(fid));
    arc.faces.push_back(fid);
    const FaceId end = trace(fid, face_changes[f][0], arc);
    arc.points.push_back(d.position(lone_boundary[static_cast<std::size_t>(end)]));
    arcs.push_back(std::move(arc));
  }
  if (include_loops) {
    for (std::size_t f = 0; f < F; ++f) {
      if (used[f] || face_changes[f].size() != 2) continue;
      const auto fid = static_cast<FaceId>(f);
      ZeroArc loop;
      loop.closed = true;
      used[f] = 1;
      loop.faces.push_back(fid);
      loop.points.push_back(d.face_center(fid));
      trace(fid, face_changes[f][0], loop);
      loop.points.push_back(d.face_center(fid));
      arcs.push_back(std::move(loop));
    }
  }
  return arcs;
}

}  // namespace dgff
