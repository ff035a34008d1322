#include "oqe/spectral/mesh.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "oqe/core/errors.hpp"

namespace oqe::spectral {

Eigen::Vector2d disk_to_klein(const Eigen::Vector2d& w) { return 2.0 * w / (1.0 + w.squaredNorm()); }

Eigen::Vector2d klein_to_disk(const Eigen::Vector2d& k) {
  return k / (1.0 + std::sqrt(std::max(0.0, 1.0 - k.squaredNorm())));
}

int subdivisions(int refinement) {
  if (refinement < 0 || refinement > 12) throw DomainError("refinement must be in [0, 12]");
  return 1 << (refinement + 2);
}

namespace {

int pack_tag(int e0, int e1, int e2) { return (e0 + 1) | ((e1 + 1) << 2) | ((e2 + 1) << 4); }

}  // namespace

Mesh triangle_mesh(const geom::HyperbolicTriangle<double>& tri, int refinement) {
  const int N = subdivisions(refinement);
  const Eigen::Vector2d kb = disk_to_klein({tri.disk_radius_b, 0.0});
  const Eigen::Vector2d kc = disk_to_klein(
      {tri.disk_radius_c * std::cos(tri.disk_angle_a), tri.disk_radius_c * std::sin(tri.disk_angle_a)});
  Mesh m;
  m.refinement = refinement;
  // vertex (i, j), i + j <= N, at (i kb + j kc) / N in Klein coordinates
  std::vector<int> row_start(N + 2, 0);
  for (int i = 0; i <= N; ++i) row_start[i + 1] = row_start[i] + (N - i + 1);
  auto idx = [&](int i, int j) { return row_start[i] + j; };
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N - i; ++j)
      m.vertices.push_back(klein_to_disk((static_cast<double>(i) * kb + static_cast<double>(j) * kc) / N));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N - i; ++j) {
      // up triangle: edges (i,j)-(i+1,j) on AB if j = 0, (i+1,j)-(i,j+1) on BC if i+j = N-1,
      // (i,j+1)-(i,j) on CA if i = 0
      m.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i, j + 1)});
      m.tags.push_back(pack_tag(j == 0 ? 2 : -1, i + j == N - 1 ? 0 : -1, i == 0 ? 1 : -1));
      if (i + j < N - 1) {
        m.triangles.push_back({idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)});
        m.tags.push_back(0);
      }
    }
  }
  return m;
}

Mesh unit_disk_mesh(int refinement) {
  const int N = subdivisions(refinement);
  Mesh m;
  m.refinement = refinement;
  m.vertices.emplace_back(0.0, 0.0);
  for (int s = 1; s <= N; ++s)
    for (int q = 0; q < 6 * s; ++q) {
      const double a = 2 * M_PI * q / (6.0 * s);
      const double r = static_cast<double>(s) / N;
      m.vertices.emplace_back(r * std::cos(a), r * std::sin(a));
    }
  auto idx = [&](int sector, int i, int j) {
    const int s = i + j;
    if (s == 0) return 0;
    const int q = (sector * s + j) % (6 * s);
    return 1 + 3 * s * (s - 1) + q;
  };
  for (int k = 0; k < 6; ++k) {
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N - i; ++j) {
        m.triangles.push_back({idx(k, i, j), idx(k, i + 1, j), idx(k, i, j + 1)});
        m.tags.push_back(pack_tag(-1, i + j == N - 1 ? 0 : -1, -1));
        if (i + j < N - 1) {
          m.triangles.push_back({idx(k, i + 1, j), idx(k, i + 1, j + 1), idx(k, i, j + 1)});
          m.tags.push_back(0);
        }
      }
    }
  }
  return m;
}

void validate_mesh(const Mesh& mesh, int n_sides) {
  if (mesh.tags.size() != mesh.triangles.size()) throw MeshError("mesh: tag count mismatch");
  const int nv = static_cast<int>(mesh.vertices.size());
  // directed edge -> (triangle, local edge)
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int v : tr)
      if (v < 0 || v >= nv) throw MeshError("mesh: vertex index out of range in triangle " + std::to_string(t));
    const Eigen::Vector2d a = mesh.vertices[tr[1]] - mesh.vertices[tr[0]];
    const Eigen::Vector2d b = mesh.vertices[tr[2]] - mesh.vertices[tr[0]];
    if (!(a(0) * b(1) - a(1) * b(0) > 0)) throw MeshError("mesh: triangle " + std::to_string(t) + " is not positively oriented");
    for (int e = 0; e < 3; ++e) {
      const auto key = std::make_pair(tr[e], tr[(e + 1) % 3]);
      if (!directed.emplace(key, static_cast<int>(t)).second)
        throw MeshError("mesh: directed edge repeated (non-conforming or inconsistent orientation)");
    }
  }
  std::set<int> seen_sides;
  std::size_t n_edges = 0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tr[e], b = tr[(e + 1) % 3];
      const bool interior = directed.count({b, a}) > 0;
      const int side = mesh.edge_side(t, e);
      if (interior && side >= 0) throw MeshError("mesh: interior edge carries a boundary tag");
      if (!interior && side < 0) throw MeshError("mesh: boundary edge without a side tag");
      if (side >= n_sides) throw MeshError("mesh: side tag out of range");
      if (side >= 0) seen_sides.insert(side);
      if (!interior || a < b) ++n_edges;
    }
  }
  if (static_cast<int>(seen_sides.size()) != n_sides) throw MeshError("mesh: boundary tags do not cover every side");
  // a conforming triangulation of a disk has Euler characteristic 1
  std::vector<char> used(nv, 0);
  for (const auto& tr : mesh.triangles)
    for (int v : tr) used[v] = 1;
  for (char u : used)
    if (!u) throw MeshError("mesh: unused vertex");
  const long long chi = static_cast<long long>(nv) - static_cast<long long>(n_edges) +
                        static_cast<long long>(mesh.triangles.size());
  if (chi != 1) throw MeshError("mesh: Euler characteristic " + std::to_string(chi) + " (hanging node or hole)");
}

namespace {

void put_double(std::string& s, double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  s.append(buf, res.ptr);
}

double parse_double(const std::string& tok) {
  double x = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) throw MeshError("mesh file: bad number '" + tok + "'");
  return x;
}

long long parse_int(const std::string& tok) {
  long long x = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) throw MeshError("mesh file: bad integer '" + tok + "'");
  return x;
}

int infer_refinement(std::size_t nt) {
  for (int r = 0; r <= 12; ++r) {
    const std::size_t N = static_cast<std::size_t>(subdivisions(r));
    if (nt == N * N || nt == 6 * N * N) return r;
  }
  return -1;
}

}  // namespace

void write_mesh(const Mesh& mesh, std::ostream& out) {
  std::string s = "mesh v=" + std::to_string(mesh.vertices.size()) + " t=" + std::to_string(mesh.triangles.size()) + "\n";
  for (const auto& v : mesh.vertices) {
    put_double(s, v(0));
    s += ' ';
    put_double(s, v(1));
    s += '\n';
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    s += std::to_string(tr[0]) + ' ' + std::to_string(tr[1]) + ' ' + std::to_string(tr[2]) + ' ' +
         std::to_string(mesh.tags[t]) + '\n';
  }
  out << s;
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw MeshError("mesh file: empty");
  std::istringstream head(line);
  std::string word, vpart, tpart;
  head >> word >> vpart >> tpart;
  if (word != "mesh" || vpart.rfind("v=", 0) != 0 || tpart.rfind("t=", 0) != 0)
    throw MeshError("mesh file: bad header '" + line + "'");
  const long long nv = parse_int(vpart.substr(2));
  const long long nt = parse_int(tpart.substr(2));
  if (nv < 3 || nt < 1) throw MeshError("mesh file: bad counts");
  Mesh m;
  std::string a, b, c, d;
  for (long long k = 0; k < nv; ++k) {
    if (!(in >> a >> b)) throw MeshError("mesh file: truncated vertex list");
    m.vertices.emplace_back(parse_double(a), parse_double(b));
  }
  for (long long k = 0; k < nt; ++k) {
    if (!(in >> a >> b >> c >> d)) throw MeshError("mesh file: truncated triangle list");
    m.triangles.push_back({static_cast<int>(parse_int(a)), static_cast<int>(parse_int(b)), static_cast<int>(parse_int(c))});
    m.tags.push_back(static_cast<int>(parse_int(d)));
  }
  m.refinement = infer_refinement(m.triangles.size());
  return m;
}

}  // namespace oqe::spectral
