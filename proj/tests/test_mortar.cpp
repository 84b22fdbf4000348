#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "maas/mortar.hpp"

using namespace maas;

namespace {

std::vector<SubdomainMesh> meshes_for(const CoarsePartition& p, int cells,
                                      int cells_alt) {
  std::vector<SubdomainMesh> out;
  for (int j = 0; j < p.ny; ++j)
    for (int i = 0; i < p.nx; ++i) {
      int id = p.subdomain_id(i, j);
      int n = ((i + j) % 2 == 0) ? cells : cells_alt;
      out.push_back(build_subdomain_mesh(id, p.boxes[id], n));
    }
  return out;
}

struct Pipeline {
  CoarsePartition part;
  std::vector<SubdomainMesh> meshes;
  BrokenNumbering num;
  SparseMat A_broken;
  Eigen::VectorXd f_broken;
  SideAssignment sides;
  ConstrainedSystem sys;
};

Pipeline build_pipeline(int nx, int ny, int cells, int cells_alt,
                        MortarRule rule) {
  Pipeline p;
  p.part = build_partition(nx, ny);
  p.meshes = meshes_for(p.part, cells, cells_alt);
  p.num = build_broken_numbering(p.part, p.meshes);
  auto pat = make_channel_pattern(p.part, 1.0, 1e4, 1e6);
  auto field = sample_pattern(p.meshes, pat);
  p.A_broken = assemble_stiffness(p.num, p.meshes, field, WeightMode::TrueAlpha);
  p.f_broken = assemble_load(p.num, p.meshes, default_rhs);
  p.sides = assign_sides(p.part, p.meshes, rule);
  p.sys = build_constrained_system(p.part, p.meshes, p.sides, p.num,
                                   p.A_broken, p.f_broken);
  return p;
}

// Independent jump-integral oracle: five-point Gauss on each merged
// subinterval, far beyond the polynomial degree of the integrand.
double gauss5(double a, double b, const std::function<double(double)>& g) {
  static const double xs[5] = {-0.906179845938663992797626878299,
                               -0.538469310105683091036314420700, 0.0,
                               0.538469310105683091036314420700,
                               0.906179845938663992797626878299};
  static const double ws[5] = {0.236926885056189087514264040720,
                               0.478628670499366468041291514836,
                               128.0 / 225.0,
                               0.478628670499366468041291514836,
                               0.236926885056189087514264040720};
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0;
  for (int k = 0; k < 5; ++k) sum += ws[k] * g(mid + half * xs[k]);
  return half * sum;
}

double pl_eval(const std::vector<double>& t, const std::vector<double>& v,
               double x) {
  if (x <= t.front()) return v.front();
  if (x >= t.back()) return v.back();
  auto it = std::upper_bound(t.begin(), t.end(), x);
  size_t j = static_cast<size_t>(it - t.begin());
  double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
  return (1 - w) * v[j - 1] + w * v[j];
}

// max over test functions of | int (u_mortar - u_nonmortar) psi_i ds |
double max_jump_residual(const Pipeline& p, const Eigen::VectorXd& u_free,
                         int iface) {
  Eigen::VectorXd u_broken = p.sys.T * u_free;
  int ms = p.sides.mortar[iface], ss = p.sides.nonmortar[iface];
  Trace tm = extract_trace(p.meshes[ms], p.part, iface);
  Trace tsl = extract_trace(p.meshes[ss], p.part, iface);
  auto values = [&](const Trace& tr, int sub) {
    std::vector<double> v(tr.nodes.size(), 0.0);
    for (size_t k = 0; k < tr.nodes.size(); ++k) {
      int b = p.num.local_to_broken[sub][tr.nodes[k]];
      if (b >= 0) v[k] = u_broken[b];
    }
    return v;
  };
  auto vm = values(tm, ms), vs = values(tsl, ss);

  std::vector<double> merged = tm.s;
  merged.insert(merged.end(), tsl.s.begin(), tsl.s.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  int n_s = tsl.n_interior();
  double worst = 0;
  for (int i = 1; i <= n_s; ++i) {
    double acc = 0;
    for (size_t k = 0; k + 1 < merged.size(); ++k)
      acc += gauss5(merged[k], merged[k + 1], [&](double x) {
        return (pl_eval(tm.s, vm, x) - pl_eval(tsl.s, vs, x)) *
               test_function_value(tsl.s, i, x);
      });
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

} // namespace

TEST_CASE("test space basis values") {
  std::vector<double> t{0, 0.2, 0.4, 0.6, 0.8, 1.0}; // n_s = 4
  CHECK(test_function_value(t, 1, 0.0) == 1.0);
  CHECK(test_function_value(t, 1, 0.1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(test_function_value(t, 1, 0.3) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(test_function_value(t, 1, 0.5) == 0.0);
  CHECK(test_function_value(t, 2, 0.4) == 1.0);
  CHECK(test_function_value(t, 2, 0.3) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(test_function_value(t, 2, 0.0) == 0.0);
  CHECK(test_function_value(t, 4, 0.9) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(test_function_value(t, 4, 1.0) == 1.0);
  // partition of unity on the whole segment
  for (double x : {0.05, 0.21, 0.47, 0.83, 0.99}) {
    double sum = 0;
    for (int i = 1; i <= 4; ++i) sum += test_function_value(t, i, x);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  // n_s = 1: the single test function is constant 1
  std::vector<double> t1{0, 0.5, 1.0};
  for (double x : {0.0, 0.2, 0.5, 0.9, 1.0})
    CHECK(test_function_value(t1, 1, x) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("first test function integrates to 3/2 h on a uniform side") {
  double h = 0.2;
  std::vector<double> t{0, h, 2 * h, 3 * h, 4 * h, 5 * h, 6 * h}; // n_s = 5
  double integral = 0;
  for (size_t k = 0; k + 1 < t.size(); ++k)
    integral += gauss5(t[k], t[k + 1],
                       [&](double x) { return test_function_value(t, 1, x); });
  CHECK(integral == doctest::Approx(1.5 * h).epsilon(1e-14));
}

TEST_CASE("coupling row sums agree across trial bases") {
  // Both row sums integrate the same test function against a partition of
  // unity, so they must match: sum_j M_ij = sum_j S_ij + sum_k C_ik.
  auto part = build_partition(2, 1);
  std::vector<SubdomainMesh> meshes{build_subdomain_mesh(0, part.boxes[0], 4),
                                    build_subdomain_mesh(1, part.boxes[1], 7)};
  Trace tm = extract_trace(meshes[0], part, 0);
  Trace ts = extract_trace(meshes[1], part, 0);
  auto cp = assemble_coupling(0, tm, ts);
  CHECK(cp.M.rows() == 6);
  CHECK(cp.M.cols() == 5);
  CHECK(cp.S.rows() == 6);
  CHECK(cp.S.cols() == 6);
  CHECK(cp.C.cols() == 2);
  for (int i = 0; i < cp.M.rows(); ++i) {
    double lhs = cp.M.row(i).sum();
    double rhs = cp.S.row(i).sum() + cp.C.row(i).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("elimination reproduces constants and linears") {
  auto part = build_partition(2, 1);
  std::vector<SubdomainMesh> meshes{build_subdomain_mesh(0, part.boxes[0], 5),
                                    build_subdomain_mesh(1, part.boxes[1], 8)};
  Trace tm = extract_trace(meshes[0], part, 0);
  Trace ts = extract_trace(meshes[1], part, 0);
  auto cp = assemble_coupling(0, tm, ts);
  int n_s = ts.n_interior();

  Eigen::VectorXd ones_m = Eigen::VectorXd::Ones(tm.s.size());
  Eigen::VectorXd ones_c = Eigen::VectorXd::Ones(2);
  Eigen::VectorXd slaves = cp.elim_m * ones_m - cp.elim_c * ones_c;
  for (int i = 0; i < n_s; ++i)
    CHECK(slaves[i] == doctest::Approx(1.0).epsilon(1e-12));

  auto lin = [](double s) { return 0.3 - 1.7 * s; };
  Eigen::VectorXd lm(tm.s.size()), lc(2);
  for (size_t k = 0; k < tm.s.size(); ++k) lm[k] = lin(tm.s[k]);
  lc << lin(ts.s.front()), lin(ts.s.back());
  Eigen::VectorXd lslaves = cp.elim_m * lm - cp.elim_c * lc;
  for (int i = 0; i < n_s; ++i)
    CHECK(lslaves[i] == doctest::Approx(lin(ts.s[i + 1])).epsilon(1e-11));
}

TEST_CASE("matching grids eliminate to the identity") {
  auto part = build_partition(2, 1);
  std::vector<SubdomainMesh> meshes{build_subdomain_mesh(0, part.boxes[0], 6),
                                    build_subdomain_mesh(1, part.boxes[1], 6)};
  Trace tm = extract_trace(meshes[0], part, 0);
  Trace ts = extract_trace(meshes[1], part, 0);
  auto cp = assemble_coupling(0, tm, ts);
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd vm(tm.s.size());
    for (int k = 0; k < vm.size(); ++k) vm[k] = gauss(rng);
    Eigen::VectorXd vc(2);
    vc << vm[0], vm[vm.size() - 1];
    Eigen::VectorXd vs = cp.elim_m * vm - cp.elim_c * vc;
    for (int i = 0; i < ts.n_interior(); ++i)
      CHECK(vs[i] == doctest::Approx(vm[i + 1]).epsilon(1e-11));
  }
}

TEST_CASE("dof classification partitions the broken nodes") {
  auto p = build_pipeline(3, 3, 4, 6, MortarRule::CoarserSide);
  const auto& dofs = p.sys.dofs;
  CHECK(dofs.n_corner == 4);
  // every broken node: mapped once or slave on exactly one nonmortar side
  std::vector<int> hit(p.num.total, 0);
  for (int b = 0; b < p.num.total; ++b)
    if (dofs.broken_to_free[b] >= 0) hit[b]++;
  int slaves = 0;
  for (const auto& f : p.part.interfaces) {
    int ss = p.sides.nonmortar[f.id];
    Trace ts = extract_trace(p.meshes[ss], p.part, f.id);
    for (int i = 1; i <= ts.n_interior(); ++i) {
      int b = p.num.local_to_broken[ss][ts.nodes[i]];
      REQUIRE(b >= 0);
      CHECK(dofs.broken_to_free[b] == -1);
      hit[b]++;
      ++slaves;
    }
  }
  for (int b = 0; b < p.num.total; ++b) CHECK(hit[b] == 1);
  // each cross point folds four broken copies into one shared dof
  int n_cross = static_cast<int>(p.part.cross_points.size());
  CHECK(dofs.n_free() + slaves + 3 * n_cross == p.num.total);

  // the four broken copies of a cross point share one free dof
  for (const auto& c : p.part.cross_points) {
    std::set<int> frees;
    for (int k = 0; k < 4; ++k) {
      int sub = c.subdomains[k];
      // the cross point is the corner of `sub` diagonally opposite to its
      // position: NE, NW, SE, SW for k = 0, 1, 2, 3
      int corner = p.meshes[sub].corner_nodes[k == 0 ? 2 : k == 1 ? 3 : k == 2 ? 1 : 0];
      int b = p.num.local_to_broken[sub][corner];
      REQUIRE(b >= 0);
      frees.insert(dofs.broken_to_free[b]);
    }
    CHECK(frees.size() == 1);
    CHECK(*frees.begin() == dofs.corner_dof[c.id]);
    CHECK(dofs.free_class[*frees.begin()] == DofClass::Corner);
  }

  // ordering: corners, then mortars, then interiors
  for (int d = 0; d < dofs.n_free(); ++d) {
    DofClass expect = d < dofs.n_corner ? DofClass::Corner
                      : d < dofs.n_coupled() ? DofClass::Mortar
                                             : DofClass::Interior;
    CHECK(dofs.free_class[d] == expect);
  }
}

TEST_CASE("prolongation rows: identity for free, averages for slaves") {
  auto p = build_pipeline(3, 3, 4, 6, MortarRule::FinerSide);
  const auto& dofs = p.sys.dofs;
  Eigen::MatrixXd Td(p.sys.T);
  // free-mapped broken nodes carry a single unit entry
  for (int b = 0; b < p.num.total; ++b) {
    int d = dofs.broken_to_free[b];
    if (d < 0) continue;
    CHECK(Td(b, d) == 1.0);
    CHECK(Td.row(b).sum() == 1.0);
    CHECK(Td.row(b).cwiseAbs().sum() == 1.0);
  }
  // slave rows only reference corner and mortar dofs, and sum to one when no
  // contribution was dropped at the outer boundary
  for (const auto& f : p.part.interfaces) {
    int ss = p.sides.nonmortar[f.id];
    Trace ts = extract_trace(p.meshes[ss], p.part, f.id);
    bool interior_iface =
        f.lo > 1e-12 && f.hi < 1 - 1e-12; // endpoints are cross points
    for (int i = 1; i <= ts.n_interior(); ++i) {
      int b = p.num.local_to_broken[ss][ts.nodes[i]];
      for (int d = 0; d < dofs.n_free(); ++d)
        if (Td(b, d) != 0.0) CHECK(dofs.free_class[d] != DofClass::Interior);
      if (interior_iface)
        CHECK(Td.row(b).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("constrained matrix is symmetric positive definite") {
  auto p = build_pipeline(2, 2, 4, 6, MortarRule::CoarserSide);
  SparseMat At = SparseMat(p.sys.A.transpose());
  SparseMat d = At - p.sys.A;
  double asym = 0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMat::InnerIterator it(d, k); it; ++it)
      asym = std::max(asym, std::abs(it.value()));
  CHECK(asym <= 1e-9); // scaled by alpha up to 1e6
  Eigen::MatrixXd Ad(p.sys.A);
  Eigen::LLT<Eigen::MatrixXd> llt(Ad);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("interior block of the constrained matrix equals the broken one") {
  auto p = build_pipeline(2, 2, 4, 5, MortarRule::CoarserSide);
  const auto& dofs = p.sys.dofs;
  for (size_t s = 0; s < p.meshes.size(); ++s) {
    auto [fb, fe] = dofs.interior_range[s];
    int n_i = fe - fb;
    CHECK(n_i == static_cast<int>(p.meshes[s].interior_nodes.size()));
    for (int a = 0; a < n_i; ++a)
      for (int b = 0; b < n_i; ++b) {
        int ba = p.num.local_to_broken[s][p.meshes[s].interior_nodes[a]];
        int bb = p.num.local_to_broken[s][p.meshes[s].interior_nodes[b]];
        CHECK(p.sys.A.coeff(fb + a, fb + b) == p.A_broken.coeff(ba, bb));
      }
  }
}

TEST_CASE("weak continuity holds on every interface") {
  std::mt19937 rng(2024);
  std::normal_distribution<double> gauss;
  for (auto [nx, cells, alt, rule] :
       {std::tuple{3, 4, 6, MortarRule::CoarserSide},
        std::tuple{2, 5, 7, MortarRule::FinerSide}}) {
    auto p = build_pipeline(nx, nx, cells, alt, rule);
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::VectorXd u(p.sys.dofs.n_free());
      for (int k = 0; k < u.size(); ++k) u[k] = gauss(rng);
      for (const auto& f : p.part.interfaces) {
        double res = max_jump_residual(p, u, f.id);
        CHECK(res <= 1e-12 * u.cwiseAbs().maxCoeff() * f.length());
      }
    }
  }
}

TEST_CASE("trace endpoints coincide bitwise across the interface") {
  auto part = build_partition(3, 3);
  auto meshes = meshes_for(part, 5, 8);
  for (const auto& f : part.interfaces) {
    Trace a = extract_trace(meshes[f.left], part, f.id);
    Trace b = extract_trace(meshes[f.right], part, f.id);
    CHECK(a.s.front() == b.s.front());
    CHECK(a.s.back() == b.s.back());
    CHECK(a.s.front() == f.lo);
    CHECK(a.s.back() == f.hi);
  }
}

TEST_CASE("coupling rejects mismatched traces") {
  auto part = build_partition(2, 1);
  std::vector<SubdomainMesh> meshes{build_subdomain_mesh(0, part.boxes[0], 4),
                                    build_subdomain_mesh(1, part.boxes[1], 6)};
  Trace tm = extract_trace(meshes[0], part, 0);
  Trace ts = extract_trace(meshes[1], part, 0);
  for (auto& v : ts.s) v += 0.25;
  CHECK_THROWS_AS(assemble_coupling(0, tm, ts), std::invalid_argument);
}
