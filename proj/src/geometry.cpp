#include "maas/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace maas {

namespace {

// i-th of n+1 breakpoints of [a,b]; endpoints are returned exactly so that
// both sides of an interface and the coarse grid agree bitwise.
double breakpoint(double a, double b, int i, int n) {
  if (i == 0) return a;
  if (i == n) return b;
  return a + (b - a) * (static_cast<double>(i) / n);
}

} // namespace

std::optional<int> CoarsePartition::interface_on(int subdomain, Edge e) const {
  int i = subdomain % nx, j = subdomain / nx;
  int nv = (nx - 1) * ny; // vertical interfaces come first
  switch (e) {
    case kEast:
      if (i == nx - 1) return std::nullopt;
      return j * (nx - 1) + i;
    case kWest:
      if (i == 0) return std::nullopt;
      return j * (nx - 1) + (i - 1);
    case kNorth:
      if (j == ny - 1) return std::nullopt;
      return nv + j * nx + i;
    case kSouth:
      if (j == 0) return std::nullopt;
      return nv + (j - 1) * nx + i;
  }
  return std::nullopt;
}

CoarsePartition build_partition(int nx, int ny) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_partition: subdomain counts must be positive");
  CoarsePartition p;
  p.nx = nx;
  p.ny = ny;
  p.h_coarse = std::max(1.0 / nx, 1.0 / ny);

  std::vector<double> xs(nx + 1), ys(ny + 1);
  for (int i = 0; i <= nx; ++i) xs[i] = breakpoint(0.0, 1.0, i, nx);
  for (int j = 0; j <= ny; ++j) ys[j] = breakpoint(0.0, 1.0, j, ny);

  p.boxes.resize(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      p.boxes[p.subdomain_id(i, j)] = Rect{xs[i], ys[j], xs[i + 1], ys[j + 1]};

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      Interface f;
      f.id = static_cast<int>(p.interfaces.size());
      f.left = p.subdomain_id(i, j);
      f.right = p.subdomain_id(i + 1, j);
      f.axis = 0;
      f.line = xs[i + 1];
      f.lo = ys[j];
      f.hi = ys[j + 1];
      p.interfaces.push_back(f);
    }
  // the loop above fills ids j*(nx-1)+i; horizontal ones continue from nv
  std::vector<Interface> horizontal;
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Interface f;
      f.id = static_cast<int>(p.interfaces.size() + horizontal.size());
      f.left = p.subdomain_id(i, j);
      f.right = p.subdomain_id(i, j + 1);
      f.axis = 1;
      f.line = ys[j + 1];
      f.lo = xs[i];
      f.hi = xs[i + 1];
      horizontal.push_back(f);
    }
  p.interfaces.insert(p.interfaces.end(), horizontal.begin(), horizontal.end());

  for (int cy = 1; cy < ny; ++cy)
    for (int cx = 1; cx < nx; ++cx) {
      CrossPoint c;
      c.id = static_cast<int>(p.cross_points.size());
      c.x = xs[cx];
      c.y = ys[cy];
      c.subdomains = {p.subdomain_id(cx - 1, cy - 1), p.subdomain_id(cx, cy - 1),
                      p.subdomain_id(cx - 1, cy), p.subdomain_id(cx, cy)};
      p.cross_points.push_back(c);
    }
  return p;
}

std::array<double, 2> SubdomainMesh::barycenter(int tri) const {
  const auto& t = triangles[tri];
  double x = (nodes[t[0]][0] + nodes[t[1]][0] + nodes[t[2]][0]) / 3.0;
  double y = (nodes[t[0]][1] + nodes[t[1]][1] + nodes[t[2]][1]) / 3.0;
  return {x, y};
}

bool SubdomainMesh::node_on_box_edge(int node) const {
  int i = node % (n_cells + 1), j = node / (n_cells + 1);
  return i == 0 || i == n_cells || j == 0 || j == n_cells;
}

SubdomainMesh build_subdomain_mesh(int subdomain, const Rect& box, int n_cells) {
  if (n_cells < 2)
    throw std::invalid_argument(
        "build_subdomain_mesh: need at least 2 cells per direction");
  SubdomainMesh m;
  m.subdomain = subdomain;
  m.box = box;
  m.n_cells = n_cells;
  int n = n_cells;

  m.nodes.resize((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.nodes[m.node_id(i, j)] = {breakpoint(box.x0, box.x1, i, n),
                                  breakpoint(box.y0, box.y1, j, n)};

  m.triangles.reserve(2 * n * n);
  for (int cj = 0; cj < n; ++cj)
    for (int ci = 0; ci < n; ++ci) {
      int v00 = m.node_id(ci, cj), v10 = m.node_id(ci + 1, cj);
      int v11 = m.node_id(ci + 1, cj + 1), v01 = m.node_id(ci, cj + 1);
      m.triangles.push_back({v00, v10, v11}); // below the diagonal
      m.triangles.push_back({v00, v11, v01}); // above it
    }

  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i) m.interior_nodes.push_back(m.node_id(i, j));

  for (int i = 0; i <= n; ++i) {
    m.edge_nodes[kSouth].push_back(m.node_id(i, 0));
    m.edge_nodes[kNorth].push_back(m.node_id(i, n));
  }
  for (int j = 0; j <= n; ++j) {
    m.edge_nodes[kWest].push_back(m.node_id(0, j));
    m.edge_nodes[kEast].push_back(m.node_id(n, j));
  }
  m.corner_nodes = {m.node_id(0, 0), m.node_id(n, 0), m.node_id(n, n),
                    m.node_id(0, n)};

  m.in_boundary_layer.assign(m.triangles.size(), 0);
  for (int t = 0; t < m.n_triangles(); ++t) {
    bool touches = false;
    for (int v : m.triangles[t]) touches = touches || m.node_on_box_edge(v);
    if (touches) {
      m.in_boundary_layer[t] = 1;
      m.boundary_layer.push_back(t);
    }
  }
  return m;
}

SideAssignment assign_sides(const CoarsePartition& part,
                            const std::vector<SubdomainMesh>& meshes,
                            MortarRule rule,
                            const std::vector<int>* explicit_mortar) {
  SideAssignment out;
  out.rule = rule;
  size_t nf = part.interfaces.size();
  if (rule == MortarRule::Explicit) {
    if (!explicit_mortar || explicit_mortar->size() != nf)
      throw std::invalid_argument(
          "assign_sides: explicit assignment must name one side per interface");
  }
  out.mortar.resize(nf);
  out.nonmortar.resize(nf);
  for (const auto& f : part.interfaces) {
    int pick;
    if (rule == MortarRule::Explicit) {
      pick = (*explicit_mortar)[f.id];
      if (pick != f.left && pick != f.right)
        throw std::invalid_argument(
            "assign_sides: explicit mortar side is not adjacent to interface " +
            std::to_string(f.id));
    } else {
      int cl = meshes[f.left].n_cells, cr = meshes[f.right].n_cells;
      bool left_coarser = cl < cr || (cl == cr && f.left < f.right);
      bool want_coarser = rule == MortarRule::CoarserSide;
      if (cl == cr) // ties always go to the lower id
        pick = std::min(f.left, f.right);
      else
        pick = (left_coarser == want_coarser) ? f.left : f.right;
    }
    out.mortar[f.id] = pick;
    out.nonmortar[f.id] = (pick == f.left) ? f.right : f.left;
  }
  return out;
}

Edge edge_of_interface(const CoarsePartition& part, int subdomain, int iface) {
  const Interface& f = part.interfaces.at(iface);
  if (subdomain == f.left) return f.axis == 0 ? kEast : kNorth;
  if (subdomain == f.right) return f.axis == 0 ? kWest : kSouth;
  throw std::logic_error("edge_of_interface: subdomain not adjacent");
}

} // namespace maas
