// Piecewise-constant diffusion coefficients. The channel pattern places
// high-contrast inclusions on a periodic tile of subdomains: straight
// "crossing" channels that run through subdomain interiors and across
// interfaces, and L-shaped "corner" channels kept strictly inside their
// subdomain. Evaluation depends only on the query point, so any mesh samples
// the same field.
#pragma once

#include <vector>

#include "maas/geometry.hpp"

namespace maas {

struct ChannelPattern {
  double alpha_background = 1.0;
  double alpha_corner = 1.0;   // L-shaped interior channels
  double alpha_crossing = 1.0; // straight channels through interfaces
  double subdomain_size = 1.0; // H of the partition the pattern is tied to
  int period = 3;              // tile size in subdomains
  double width = -1;           // channel width; < 0 means H/6
  double corner_inset = -1;    // gap between an L channel and the subdomain
                               // boundary; < 0 means H/4
  double corner_leg = -1;      // leg length of the L; < 0 means H/2

  double width_or_default() const { return width > 0 ? width : subdomain_size / 6.0; }
  double inset_or_default() const { return corner_inset > 0 ? corner_inset : subdomain_size / 4.0; }
  double leg_or_default() const { return corner_leg > 0 ? corner_leg : subdomain_size / 2.0; }

  // Value at a point; crossing channels take precedence over corner ones.
  double value(double x, double y) const;
};

ChannelPattern make_channel_pattern(const CoarsePartition& part, double alpha_b,
                                    double alpha_c, double alpha_i);

// One alpha per triangle per subdomain, sampled at barycenters.
struct CoefficientField {
  std::vector<std::vector<double>> alpha; // [subdomain][triangle]
};

CoefficientField sample_pattern(const std::vector<SubdomainMesh>& meshes,
                                const ChannelPattern& pattern);
CoefficientField constant_field(const std::vector<SubdomainMesh>& meshes,
                                double value);

// min over all triangles of each subdomain
std::vector<double> subdomain_minima(const CoefficientField& field);
// min over the boundary-layer triangles of each subdomain
std::vector<double> boundary_layer_minima(const CoefficientField& field,
                                          const std::vector<SubdomainMesh>& meshes);

// rows: subdomain, triangle, alpha
void write_field_csv(const CoefficientField& field, const std::string& path);

} // namespace maas
