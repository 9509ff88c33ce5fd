#include "pstokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace pstokes {

int Mesh::n_boundary_edges() const {
  return static_cast<int>(std::count(edge_on_boundary.begin(), edge_on_boundary.end(), 1));
}

int Mesh::n_boundary_vertices() const {
  return static_cast<int>(std::count(vertex_on_boundary.begin(), vertex_on_boundary.end(), 1));
}

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Vec2 a = vertices[tri[0]], b = vertices[tri[1]], c = vertices[tri[2]];
  return 0.5 * cross(b - a, c - a);
}

double Mesh::edge_length(int e) const {
  return norm(vertices[edges[e][1]] - vertices[edges[e][0]]);
}

double Mesh::total_area() const {
  double s = 0.0;
  for (int t = 0; t < n_triangles(); ++t) s += triangle_area(t);
  return s;
}

double Mesh::boundary_length() const {
  double s = 0.0;
  for (int e = 0; e < n_edges(); ++e)
    if (edge_on_boundary[e]) s += edge_length(e);
  return s;
}

void Mesh::check_invariants() const {
  for (int t = 0; t < n_triangles(); ++t)
    if (triangle_area(t) <= 0.0)
      throw MeshError("triangle " + std::to_string(t) + " is not positively oriented");
  for (int e = 0; e < n_edges(); ++e) {
    const bool boundary = edge_triangles[e][1] < 0;
    if (boundary != static_cast<bool>(edge_on_boundary[e]))
      throw MeshError("edge " + std::to_string(e) + " has inconsistent boundary flag");
  }
  if (n_vertices() - n_edges() + n_triangles() != 1)
    throw MeshError("Euler relation V - E + T = 1 violated");
}

namespace {

// Outward normal of triangle t on its local edge le (CCW traversal).
Vec2 outward_normal(const std::vector<Vec2>& verts, const std::array<int, 3>& tri, int le) {
  const Vec2 a = verts[tri[(le + 1) % 3]];
  const Vec2 b = verts[tri[(le + 2) % 3]];
  const Vec2 d = b - a;
  const double len = norm(d);
  return perp(d) * (1.0 / len);
}

}  // namespace

Mesh build_topology(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles) {
  Mesh mesh;
  const int nv = static_cast<int>(vertices.size());
  for (auto& tri : triangles) {
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || tri[k] >= nv)
        throw MeshError("triangle references invalid vertex index " + std::to_string(tri[k]));
    const Vec2 a = vertices[tri[0]], b = vertices[tri[1]], c = vertices[tri[2]];
    double area2 = cross(b - a, c - a);
    const double h = std::max({norm(b - a), norm(c - b), norm(a - c)});
    if (std::abs(area2) <= 2.0 * 1e-14 * h * h)
      throw MeshError("degenerate triangle with vertices " + std::to_string(tri[0]) + " " +
                      std::to_string(tri[1]) + " " + std::to_string(tri[2]));
    if (area2 < 0.0) std::swap(tri[1], tri[2]);
  }

  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  const int nt = mesh.n_triangles();

  // Edge deduplication keyed by sorted endpoint pair; first-encounter order.
  std::map<std::pair<int, int>, int> edge_id;
  mesh.triangle_to_edges.assign(nt, {-1, -1, -1});
  for (int t = 0; t < nt; ++t) {
    for (int le = 0; le < 3; ++le) {
      int a = mesh.triangles[t][(le + 1) % 3];
      int b = mesh.triangles[t][(le + 2) % 3];
      const auto key = std::minmax(a, b);
      auto it = edge_id.find(key);
      int e;
      if (it == edge_id.end()) {
        e = mesh.n_edges();
        edge_id.emplace(key, e);
        mesh.edges.push_back({key.first, key.second});
        mesh.edge_triangles.push_back({t, -1});
      } else {
        e = it->second;
        auto& adj = mesh.edge_triangles[e];
        if (adj[1] >= 0)
          throw MeshError("non-manifold edge (" + std::to_string(key.first) + "," +
                          std::to_string(key.second) + ") shared by more than two triangles");
        adj[1] = t;
      }
      mesh.triangle_to_edges[t][le] = e;
    }
  }

  const int ne = mesh.n_edges();
  mesh.edge_on_boundary.assign(ne, 0);
  mesh.vertex_on_boundary.assign(mesh.n_vertices(), 0);
  mesh.edge_normals.assign(ne, Vec2{});
  mesh.triangle_edge_sign.assign(nt, {0, 0, 0});

  for (int e = 0; e < ne; ++e) {
    const auto adj = mesh.edge_triangles[e];
    if (adj[1] < 0) {
      mesh.edge_on_boundary[e] = 1;
      mesh.vertex_on_boundary[mesh.edges[e][0]] = 1;
      mesh.vertex_on_boundary[mesh.edges[e][1]] = 1;
    }
    const int t_lo = std::min(adj[0], adj[1] < 0 ? adj[0] : adj[1]);
    int le_lo = -1;
    for (int le = 0; le < 3; ++le)
      if (mesh.triangle_to_edges[t_lo][le] == e) le_lo = le;
    mesh.edge_normals[e] = outward_normal(mesh.vertices, mesh.triangles[t_lo], le_lo);
  }

  for (int t = 0; t < nt; ++t) {
    for (int le = 0; le < 3; ++le) {
      const int e = mesh.triangle_to_edges[t][le];
      const Vec2 out = outward_normal(mesh.vertices, mesh.triangles[t], le);
      const double d = dot(out, mesh.edge_normals[e]);
      if (std::abs(std::abs(d) - 1.0) > 1e-9)
        throw MeshError("non-manifold edge " + std::to_string(e) +
                        ": adjacent triangles lie on the same side");
      mesh.triangle_edge_sign[t][le] = d > 0.0 ? 1 : -1;
    }
  }
  // Two adjacent triangles must see the shared edge with opposite signs.
  for (int e = 0; e < ne; ++e) {
    const auto adj = mesh.edge_triangles[e];
    if (adj[1] < 0) continue;
    int s[2] = {0, 0};
    for (int k = 0; k < 2; ++k)
      for (int le = 0; le < 3; ++le)
        if (mesh.triangle_to_edges[adj[k]][le] == e) s[k] = mesh.triangle_edge_sign[adj[k]][le];
    if (s[0] * s[1] != -1)
      throw MeshError("non-manifold edge " + std::to_string(e) +
                      ": duplicate or overlapping triangles");
  }

  mesh.h_max = 0.0;
  for (int t = 0; t < nt; ++t)
    for (int le = 0; le < 3; ++le)
      mesh.h_max = std::max(mesh.h_max, mesh.edge_length(mesh.triangle_to_edges[t][le]));

  mesh.check_invariants();
  return mesh;
}

Mesh make_lshape_mesh() {
  std::vector<Vec2> verts = {
      {-1.0, -1.0}, {0.0, -1.0},              // 0 1
      {-1.0, 0.0},  {0.0, 0.0},  {1.0, 0.0},  // 2 3 4
      {-1.0, 1.0},  {0.0, 1.0},  {1.0, 1.0},  // 5 6 7
      {-0.5, 0.5},  {0.5, 0.5},  {-0.5, -0.5} // centroids 8 9 10
  };
  std::vector<std::array<int, 3>> tris;
  const auto add_square = [&](int sw, int se, int ne, int nw, int c) {
    tris.push_back({sw, se, c});
    tris.push_back({se, ne, c});
    tris.push_back({ne, nw, c});
    tris.push_back({nw, sw, c});
  };
  add_square(2, 3, 6, 5, 8);   // [-1,0] x [0,1]
  add_square(3, 4, 7, 6, 9);   // [0,1] x [0,1]
  add_square(0, 1, 3, 2, 10);  // [-1,0] x [-1,0]
  return build_topology(std::move(verts), std::move(tris));
}

Mesh red_refine(const Mesh& mesh) {
  std::vector<Vec2> verts = mesh.vertices;
  verts.reserve(mesh.n_vertices() + mesh.n_edges());
  // Midpoint of edge e becomes vertex V + e.
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Vec2 a = mesh.vertices[mesh.edges[e][0]];
    const Vec2 b = mesh.vertices[mesh.edges[e][1]];
    verts.push_back((a + b) * 0.5);
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& v = mesh.triangles[t];
    const int m0 = mesh.n_vertices() + mesh.triangle_to_edges[t][0];
    const int m1 = mesh.n_vertices() + mesh.triangle_to_edges[t][1];
    const int m2 = mesh.n_vertices() + mesh.triangle_to_edges[t][2];
    tris.push_back({v[0], m2, m1});
    tris.push_back({v[1], m0, m2});
    tris.push_back({v[2], m1, m0});
    tris.push_back({m0, m1, m2});
  }
  return build_topology(std::move(verts), std::move(tris));
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);

  int line_no = 0;
  const auto next_line = [&](std::istringstream& out) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      std::string tok;
      if (ss >> tok) {
        out = std::istringstream(line);
        return true;
      }
    }
    return false;
  };
  const auto parse_error = [&](const std::string& what) {
    return MeshError(path + ":" + std::to_string(line_no) + ": " + what);
  };

  std::istringstream ss;
  if (!next_line(ss)) throw parse_error("empty mesh file");
  int nv = 0, nt = 0;
  if (!(ss >> nv >> nt) || nv <= 0 || nt <= 0)
    throw parse_error("expected header 'nv nt'");

  std::vector<Vec2> verts(nv);
  for (int i = 0; i < nv; ++i) {
    if (!next_line(ss)) throw parse_error("unexpected end of file in vertex list");
    if (!(ss >> verts[i].x >> verts[i].y))
      throw parse_error("expected vertex coordinates 'x y'");
  }
  std::vector<std::array<int, 3>> tris(nt);
  for (int i = 0; i < nt; ++i) {
    if (!next_line(ss)) throw parse_error("unexpected end of file in triangle list");
    if (!(ss >> tris[i][0] >> tris[i][1] >> tris[i][2]))
      throw parse_error("expected triangle indices 'i j k'");
  }
  return build_topology(std::move(verts), std::move(tris));
}

}  // namespace pstokes
