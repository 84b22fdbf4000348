#include "maas/coefficients.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace maas {

namespace {

bool in_band(double t, double lo, double hi) { return t >= lo && t < hi; }

} // namespace

double ChannelPattern::value(double x, double y) const {
  double H = subdomain_size;
  double L = period * H;
  double u = std::fmod(x, L);
  if (u < 0) u += L;
  double v = std::fmod(y, L);
  if (v < 0) v += L;

  double w = width_or_default();
  // Straight channels through the middle row and column of the tile; they
  // run the full width of the domain and cross every interface on the way.
  double c = (period / 2 + 0.5) * H;
  if (in_band(u, c - 0.5 * w, c + 0.5 * w) ||
      in_band(v, c - 0.5 * w, c + 0.5 * w))
    return alpha_crossing;

  // One L-shaped channel per subdomain, hugging the corner that faces the
  // tile centre, inset from the subdomain boundary so it never touches it.
  int a = std::min(static_cast<int>(u / H), period - 1);
  int b = std::min(static_cast<int>(v / H), period - 1);
  double xi = u - a * H, eta = v - b * H;
  double d = inset_or_default(), leg = leg_or_default();
  bool corner_right = 2 * a + 1 <= period;
  bool corner_up = 2 * b + 1 <= period;
  double band_x_lo = corner_right ? H - d - w : d;
  double band_y_lo = corner_up ? H - d - w : d;
  double leg_x_lo = corner_right ? H - d - leg : d;
  double leg_y_lo = corner_up ? H - d - leg : d;
  bool horizontal_leg =
      in_band(xi, leg_x_lo, leg_x_lo + leg) && in_band(eta, band_y_lo, band_y_lo + w);
  bool vertical_leg =
      in_band(xi, band_x_lo, band_x_lo + w) && in_band(eta, leg_y_lo, leg_y_lo + leg);
  if (horizontal_leg || vertical_leg) return alpha_corner;

  return alpha_background;
}

ChannelPattern make_channel_pattern(const CoarsePartition& part, double alpha_b,
                                    double alpha_c, double alpha_i) {
  ChannelPattern pat;
  pat.alpha_background = alpha_b;
  pat.alpha_corner = alpha_c;
  pat.alpha_crossing = alpha_i;
  pat.subdomain_size = part.h_coarse;
  return pat;
}

CoefficientField sample_pattern(const std::vector<SubdomainMesh>& meshes,
                                const ChannelPattern& pattern) {
  CoefficientField field;
  field.alpha.resize(meshes.size());
  for (size_t s = 0; s < meshes.size(); ++s) {
    field.alpha[s].resize(meshes[s].n_triangles());
    for (int t = 0; t < meshes[s].n_triangles(); ++t) {
      auto bc = meshes[s].barycenter(t);
      field.alpha[s][t] = pattern.value(bc[0], bc[1]);
    }
  }
  return field;
}

CoefficientField constant_field(const std::vector<SubdomainMesh>& meshes,
                                double value) {
  CoefficientField field;
  field.alpha.resize(meshes.size());
  for (size_t s = 0; s < meshes.size(); ++s)
    field.alpha[s].assign(meshes[s].n_triangles(), value);
  return field;
}

std::vector<double> subdomain_minima(const CoefficientField& field) {
  std::vector<double> mins(field.alpha.size());
  for (size_t s = 0; s < field.alpha.size(); ++s) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : field.alpha[s]) m = std::min(m, v);
    mins[s] = m;
  }
  return mins;
}

std::vector<double> boundary_layer_minima(const CoefficientField& field,
                                          const std::vector<SubdomainMesh>& meshes) {
  std::vector<double> mins(field.alpha.size());
  for (size_t s = 0; s < field.alpha.size(); ++s) {
    double m = std::numeric_limits<double>::infinity();
    for (int t : meshes[s].boundary_layer) m = std::min(m, field.alpha[s][t]);
    mins[s] = m;
  }
  return mins;
}

void write_field_csv(const CoefficientField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
  out << "subdomain,triangle,alpha\n";
  char line[96];
  for (size_t s = 0; s < field.alpha.size(); ++s)
    for (size_t t = 0; t < field.alpha[s].size(); ++t) {
      std::snprintf(line, sizeof line, "%zu,%zu,%.17g\n", s, t, field.alpha[s][t]);
      out << line;
    }
}

} // namespace maas
