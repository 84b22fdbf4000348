// Coarse partition of the unit square into rectangular subdomains and the
// structured per-subdomain triangulations. Each subdomain carries its own
// mesh; neighbouring meshes need not match on the shared edge.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace maas {

struct Rect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

// Edge indices of a rectangular subdomain, counterclockwise from the bottom.
enum Edge : int { kSouth = 0, kEast = 1, kNorth = 2, kWest = 3 };

// A full shared edge between two adjacent subdomains. "left" is the
// subdomain on the lower-coordinate side (left of a vertical interface,
// below a horizontal one).
struct Interface {
  int id = -1;
  int left = -1, right = -1;
  int axis = 0;          // 0: vertical segment, 1: horizontal segment
  double line = 0;       // x (axis 0) or y (axis 1) of the segment
  double lo = 0, hi = 0; // extent along the segment
  double length() const { return hi - lo; }
};

struct CrossPoint {
  int id = -1;
  double x = 0, y = 0;
  // Subdomain ids meeting at this vertex, in (SW, SE, NW, NE) order
  // relative to the point.
  std::array<int, 4> subdomains{-1, -1, -1, -1};
};

struct CoarsePartition {
  int nx = 0, ny = 0;
  double h_coarse = 0; // max subdomain extent, the H of the analysis
  std::vector<Rect> boxes;
  std::vector<Interface> interfaces;
  std::vector<CrossPoint> cross_points;

  int n_subdomains() const { return nx * ny; }
  int subdomain_id(int i, int j) const { return j * nx + i; }
  // Interface id on a given edge of a subdomain, or nullopt if that edge
  // lies on the boundary of the unit square.
  std::optional<int> interface_on(int subdomain, Edge e) const;
};

// Splits [0,1]^2 into an nx-by-ny grid of boxes. Throws std::invalid_argument
// for nonpositive counts.
CoarsePartition build_partition(int nx, int ny);

// Structured triangulation of one subdomain box: n_cells x n_cells cells,
// every cell split along the diagonal from its lower-left to its upper-right
// corner. Node (i,j) has index j*(n+1)+i.
struct SubdomainMesh {
  int subdomain = -1;
  Rect box;
  int n_cells = 0;
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> triangles; // counterclockwise
  std::vector<int> interior_nodes;
  std::array<std::vector<int>, 4> edge_nodes; // per Edge, ordered along it
  std::array<int, 4> corner_nodes;            // SW, SE, NE, NW
  std::vector<char> in_boundary_layer;        // per triangle
  std::vector<int> boundary_layer;            // ids of layer triangles

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int node_id(int i, int j) const { return j * (n_cells + 1) + i; }
  std::array<double, 2> barycenter(int tri) const;
  bool node_on_box_edge(int node) const;
};

// Throws std::invalid_argument if n_cells < 2 (the mortar test space and the
// interior averages need at least one interior edge node).
SubdomainMesh build_subdomain_mesh(int subdomain, const Rect& box, int n_cells);

enum class MortarRule { CoarserSide, FinerSide, Explicit };

// Per interface: which of the two adjacent subdomains carries the mortar
// (master) side; the opposite side is the nonmortar (slave) side.
struct SideAssignment {
  MortarRule rule = MortarRule::CoarserSide;
  std::vector<int> mortar;    // subdomain id per interface
  std::vector<int> nonmortar; // subdomain id per interface
};

// CoarserSide: the side whose mesh has fewer cells on the interface becomes
// the mortar; FinerSide the opposite. Ties go to the lower subdomain id.
// Explicit assignments must name one adjacent subdomain per interface;
// anything else throws std::invalid_argument.
SideAssignment assign_sides(const CoarsePartition& part,
                            const std::vector<SubdomainMesh>& meshes,
                            MortarRule rule,
                            const std::vector<int>* explicit_mortar = nullptr);

// Edge of `subdomain` lying on interface `iface`.
Edge edge_of_interface(const CoarsePartition& part, int subdomain, int iface);

} // namespace maas
