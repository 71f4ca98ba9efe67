#include "clifangle/orientation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "clifangle/errors.hpp"
#include "clifangle/simd/kernels.hpp"

namespace clifangle {
namespace {

constexpr int kMaxEigenSweeps = 60;

struct SymmetricEigen {
  std::vector<double> values;              // descending
  std::vector<std::vector<double>> vectors;
};

// Cyclic Jacobi eigensolver for a small dense symmetric matrix (row-major).
SymmetricEigen symmetric_eigen(std::vector<double> a, int n) {
  std::vector<double> vec(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vec[i * n + i] = 1.0;
  auto at = [n](std::vector<double>& m, int i, int j) -> double& { return m[i * n + j]; };

  double total = 0.0;
  for (double x : a) total += x * x;
  const double floor = 1e-30 * total;
  const double negligible = 1e-17 * std::sqrt(total);

  bool converged = false;
  for (int sweep = 0; sweep < kMaxEigenSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
    if (off <= floor) {
      converged = true;
      break;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (std::abs(apq) <= negligible) {
          at(a, p, q) = 0.0;
          at(a, q, p) = 0.0;
          continue;
        }
        const double app = at(a, p, p);
        const double aqq = at(a, q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(a, k, p);
          const double akq = at(a, k, q);
          at(a, k, p) = c * akp - s * akq;
          at(a, k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(a, p, k);
          const double aqk = at(a, q, k);
          at(a, p, k) = c * apk - s * aqk;
          at(a, q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = at(vec, k, p);
          const double vkq = at(vec, k, q);
          at(vec, k, p) = c * vkp - s * vkq;
          at(vec, k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged)
    throw Error(ErrorKind::SplitFailure, "eigen-reduction of the bivector did not converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return at(a, x, x) > at(a, y, y); });
  SymmetricEigen out;
  for (int idx : order) {
    out.values.push_back(at(a, idx, idx));
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = at(vec, k, idx);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

double norm(std::span<const double> v) {
  return std::sqrt(simd::kernels().sum_squares(v.data(), v.size()));
}

void orthogonalize(std::vector<double>& w, const std::vector<std::vector<double>>& basis) {
  const auto& k = simd::kernels();
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) k.axpy(-k.dot(q.data(), w.data(), w.size()), q.data(), w.data(), w.size());
}

// x _| F for a bivector F given by its antisymmetric coefficient matrix
// (row-major, m[i][j] = coefficient of e_i e_j for i < j): returns M^T x.
std::vector<double> contract(const std::vector<double>& m, int n, std::span<const double> x) {
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[j] += x[i] * m[i * n + j];
  return y;
}

void check_pair(const Blade& a, const Blade& b) {
  if (a.dim() != b.dim())
    throw Error(ErrorKind::DimensionMismatch, "blades live in Cl(" + std::to_string(a.dim()) +
                                                  ") and Cl(" + std::to_string(b.dim()) + ")");
  if (a.grade() != b.grade())
    throw Error(ErrorKind::GradeMismatch, "subspaces have dimensions " + std::to_string(a.grade()) +
                                              " and " + std::to_string(b.grade()));
  if (!(a.magnitude() > 0.0) || !(b.magnitude() > 0.0))
    throw Error(ErrorKind::ZeroBlade, "blade has zero magnitude");
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

std::vector<PlaneComponent> bivector_split(const Multivector& f, double tol_split,
                                           double min_sigma) {
  const int n = f.dim();
  const auto c = f.coeffs();
  for (BasisBlade bits = 0; bits < c.size(); ++bits)
    if (grade_of(bits) != 2 && c[bits] != 0.0)
      throw Error(ErrorKind::InvalidArgument, "bivector_split expects a pure grade-2 argument");
  const double f_norm = modulus(f);
  if (f_norm == 0.0) return {};

  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = c[(BasisBlade{1} << i) | (BasisBlade{1} << j)];
      m[i * n + j] = v;
      m[j * n + i] = -v;
    }
  // M^T M has eigenvalue sigma_k^2 on each plane of F, twice.
  std::vector<double> mtm(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += m[k * n + i] * m[k * n + j];
      mtm[i * n + j] = acc;
    }
  const SymmetricEigen eig = symmetric_eigen(std::move(mtm), n);

  const auto& kern = simd::kernels();
  std::vector<std::vector<double>> used;
  std::vector<PlaneComponent> out;
  double dropped_sq = 0.0;
  for (const auto& candidate : eig.vectors) {
    if (static_cast<int>(used.size()) + 2 > n) break;
    std::vector<double> u = candidate;
    orthogonalize(u, used);
    const double len = norm(u);
    if (len < 0.5) continue;
    kern.scale(1.0 / len, u.data(), u.size());

    std::vector<double> v = contract(m, n, u);
    double sigma = norm(v);
    if (sigma <= min_sigma || sigma == 0.0) {
      dropped_sq += sigma * sigma;
      continue;
    }
    // One refinement step: on the plane, v _| F = -sigma u.
    kern.scale(1.0 / sigma, v.data(), v.size());
    u = contract(m, n, v);
    orthogonalize(u, used);
    kern.scale(-1.0 / norm(u), u.data(), u.size());
    v = contract(m, n, u);
    orthogonalize(v, used);
    kern.axpy(-kern.dot(u.data(), v.data(), v.size()), u.data(), v.data(), v.size());
    sigma = norm(v);
    if (sigma <= min_sigma || sigma == 0.0) {
      dropped_sq += sigma * sigma;
      continue;
    }
    kern.scale(1.0 / sigma, v.data(), v.size());

    Multivector plane = outer_product(Multivector::vector(n, u), Multivector::vector(n, v));
    used.push_back(u);
    used.push_back(v);
    out.push_back(PlaneComponent{sigma, std::move(plane), std::move(u), std::move(v)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PlaneComponent& x, const PlaneComponent& y) { return x.sigma > y.sigma; });

  Multivector rebuilt(n);
  for (const PlaneComponent& pc : out) rebuilt += pc.sigma * pc.plane;
  const double residual = modulus(f - rebuilt);
  if (residual > tol_split * f_norm + std::sqrt(dropped_sq))
    throw Error(ErrorKind::SplitFailure, "bivector split residual " + std::to_string(residual) +
                                             " exceeds tolerance");
  return out;
}

double cos_angle(const Blade& a, const Blade& b) {
  check_pair(a, b);
  return scalar_product(a.mv(), reverse(b.mv())) / (a.magnitude() * b.magnitude());
}

double sin_product(const Blade& a, const Blade& b) {
  check_pair(a, b);
  const int r = a.grade();
  if (2 * r > a.dim()) return 0.0;
  const Multivector g = geometric_product(a.mv(), reverse(b.mv()));
  return modulus(grade_projection(g, 2 * r)) / (a.magnitude() * b.magnitude());
}

ProductDecomposition decompose_product(const Blade& a, const Blade& b, const Tolerances& tol) {
  check_pair(a, b);
  const int r = a.grade();
  const int n = a.dim();
  ProductDecomposition d;
  d.g = geometric_product(unit_blade(a).mv(), reverse(unit_blade(b).mv()));
  d.grade_norms = grade_norms(d.g);

  const int grade_cap = 2 * std::min(r, n / 2);
  double odd_sq = 0.0;
  double excess_sq = 0.0;
  int lowest = -1;
  int highest = -1;
  for (int k = 0; k <= n; ++k) {
    const double gn = d.grade_norms[k];
    if (k % 2 == 1)
      odd_sq += gn * gn;
    else if (k > grade_cap)
      excess_sq += gn * gn;
    if (gn > tol.grade) {
      if (lowest < 0) lowest = k;
      highest = k;
    }
  }
  d.odd_grade_leakage = std::sqrt(odd_sq);
  d.excess_grade_leakage = std::sqrt(excess_sq);
  if (lowest < 0)
    throw Error(ErrorKind::NumericalFailure, "product of unit blades has no grade above tolerance");
  if (lowest % 2 == 1 || highest % 2 == 1 || highest > grade_cap)
    throw Error(ErrorKind::NumericalFailure, "product of blades has grades outside the even range");
  d.lowest_grade = lowest;
  d.highest_grade = highest;
  d.t_perpendicular = lowest / 2;
  d.s_intersection = r - highest / 2;
  if (d.s_intersection < 0)
    throw Error(ErrorKind::NumericalFailure, "top grade exceeds twice the blade grade");
  return d;
}

namespace {

constexpr double kAcceptReconstruction = 1e-12;
constexpr double kMaxReconstruction = 1e-6;

// Closest blade of grade k to a homogeneous k-vector: spanned by the top
// eigenvectors of Q_ij = <e_i _| P, e_j _| P>, which is diagonal in the
// frame of any sum of blades over orthogonal planes.
Multivector nearest_unit_blade(const Multivector& part, int k) {
  const int n = part.dim();
  if (k == 0) return Multivector::scalar(n, 1.0);
  const auto c = part.coeffs();
  std::vector<std::vector<double>> rows(n, std::vector<double>(c.size(), 0.0));
  for (BasisBlade m = 0; m < c.size(); ++m) {
    if (c[m] == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const BasisBlade bit = BasisBlade{1} << i;
      if (!(m & bit)) continue;
      const bool odd = std::popcount(m & (bit - 1)) % 2 == 1;
      rows[i][m ^ bit] = odd ? -c[m] : c[m];
    }
  }
  const auto& kern = simd::kernels();
  std::vector<double> q(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      q[i * n + j] = q[j * n + i] = kern.dot(rows[i].data(), rows[j].data(), c.size());
  const SymmetricEigen eig = symmetric_eigen(std::move(q), n);
  Multivector blade = Multivector::scalar(n, 1.0);
  for (int i = 0; i < k; ++i) blade = outer_product(blade, Multivector::vector(n, eig.vectors[i]));
  const double len = modulus(blade);
  if (!(len > 0.0)) throw Error(ErrorKind::NumericalFailure, "reference blade vanished");
  return blade / len;
}

struct Factoring {
  Multivector perpendicular{1};
  int t = 0;
  std::vector<AngleReport::RotationPlane> planes;
  double split_residual = 0.0;
  double reconstruction = 0.0;
};

// G = L (L~ G) for a unit blade L; the bivector part of L~G over its scalar
// part splits into tan(theta) on planes outside L and -cot(theta) inside.
Factoring factor_against(const Multivector& g, Multivector l, int grade, int r, const Tolerances& tol) {
  const int n = g.dim();
  Multivector rest = reverse(l) * g;
  double g0 = rest.scalar_part();
  if (g0 < 0.0) {
    l = -l;
    rest = -rest;
    g0 = -g0;
  }
  if (!(g0 > 0.0)) throw Error(ErrorKind::NumericalFailure, "reference blade is orthogonal to the product");

  Factoring out;
  out.perpendicular = l;
  out.t = grade / 2;
  if (n >= 2) {
    const Multivector f = grade_projection(rest, 2) / g0;
    const std::vector<PlaneComponent> split = bivector_split(f, tol.split, tol.grade);
    Multivector rebuilt(n);
    for (const PlaneComponent& pc : split) rebuilt += pc.sigma * pc.plane;
    const double f_norm = modulus(f);
    out.split_residual = f_norm > 0.0 ? modulus(f - rebuilt) / f_norm : 0.0;
    for (const PlaneComponent& pc : split) {
      if (modulus(outer_product(pc.plane, l)) < 0.5) {
        out.perpendicular = out.perpendicular * pc.plane;
        --out.t;
        out.planes.push_back({std::numbers::pi / 2.0 - std::atan(pc.sigma), 1.0 / pc.sigma, -pc.plane});
      } else {
        out.planes.push_back({std::atan(pc.sigma), pc.sigma, pc.plane});
      }
    }
  }
  const int nonzero = out.t + static_cast<int>(out.planes.size());
  if (nonzero > r)
    throw Error(ErrorKind::NumericalFailure, "found " + std::to_string(nonzero) +
                                                 " nonzero principal angles for r = " + std::to_string(r));
  std::stable_sort(out.planes.begin(), out.planes.end(),
                   [](const auto& x, const auto& y) { return x.angle > y.angle; });

  Multivector rebuilt = out.perpendicular;
  for (const auto& rp : out.planes) {
    Multivector rotor = std::sin(rp.angle) * rp.plane;
    rotor[0] += std::cos(rp.angle);
    rebuilt = rebuilt * rotor;
  }
  out.reconstruction = (rebuilt - g).max_abs();
  return out;
}

}  // namespace

AngleReport full_orientation(const Blade& a, const Blade& b, const Tolerances& tol) {
  ProductDecomposition d = decompose_product(a, b, tol);
  const int r = a.grade();
  const int n = a.dim();
  constexpr double half_pi = std::numbers::pi / 2.0;

  AngleReport rep;
  rep.r = r;
  rep.n = n;
  rep.cos_total = clamp_unit(d.g.scalar_part());
  rep.sin_product_abs = d.grade_norms[d.highest_grade];
  rep.grade_s = d.s_intersection;
  rep.grade_t = d.t_perpendicular;
  rep.grade_norms = d.grade_norms;
  rep.residuals.odd_grade_leakage = d.odd_grade_leakage;
  rep.residuals.excess_grade_leakage = d.excess_grade_leakage;
  rep.residuals.sin_formula_available = 2 * r <= n;

  // Lowest grade part: (prod of cosines) times the unit blade of the
  // perpendicular planes.
  const Multivector lowest = grade_projection(d.g, d.lowest_grade);
  const Multivector lowest_unit = lowest / modulus(lowest);
  {
    Multivector check = lowest_unit * reverse(lowest_unit);
    check[0] -= 1.0;
    rep.residuals.lowest_grade_blade = modulus(check);
  }

  std::optional<Factoring> best;
  std::optional<Error> first_error;
  auto attempt = [&](int grade, auto&& make_blade) {
    try {
      Factoring f = factor_against(d.g, make_blade(), grade, r, tol);
      if (!best || f.reconstruction < best->reconstruction) best = std::move(f);
    } catch (const Error& e) {
      if (!first_error) first_error = e;
    }
  };
  attempt(d.lowest_grade, [&] { return lowest_unit; });
  // Several nearly perpendicular planes push the cosine product under
  // tol.grade, and the lowest grade part is then a sum of blades. Retry
  // against the nearest blade of every even grade part.
  if (!best || best->reconstruction > kAcceptReconstruction) {
    for (int k = 0; k <= 2 * std::min(r, n / 2); k += 2) {
      const Multivector part = grade_projection(d.g, k);
      if (modulus(part) == 0.0) continue;
      attempt(k, [&] { return nearest_unit_blade(part, k); });
      if (best && best->reconstruction <= kAcceptReconstruction) break;
    }
  }
  if (!best) throw *first_error;
  if (!(best->reconstruction <= kMaxReconstruction))
    throw Error(ErrorKind::NumericalFailure, "could not factor the blade product into plane rotations");

  rep.perpendicular_blade = std::move(best->perpendicular);
  rep.rotation_planes = std::move(best->planes);
  rep.residuals.split = best->split_residual;
  rep.residuals.reconstruction = best->reconstruction;
  const int t = best->t;

  rep.principal_angles.assign(t, half_pi);
  for (const auto& rp : rep.rotation_planes) rep.principal_angles.push_back(rp.angle);
  rep.principal_angles.resize(r, 0.0);
  std::stable_sort(rep.principal_angles.begin(), rep.principal_angles.end(), std::greater<>());

  for (double theta : rep.principal_angles) {
    if (theta < tol.angle) ++rep.s_intersection;
    if (std::abs(theta - half_pi) < tol.angle) ++rep.t_perpendicular;
  }

  if (t == 1) rep.principal_planes.push_back(rep.perpendicular_blade);
  for (const auto& rp : rep.rotation_planes) rep.principal_planes.push_back(rp.plane);

  // Cross-checks against the untouched product.
  double cos_prod = 1.0;
  double sin_prod = 1.0;
  for (double theta : rep.principal_angles) {
    cos_prod *= std::cos(theta);
    if (theta > 0.0) sin_prod *= std::sin(theta);
  }
  rep.residuals.cos_consistency = std::abs(cos_prod - std::abs(rep.cos_total));
  rep.residuals.sin_consistency = std::abs(sin_prod - rep.sin_product_abs);

  Multivector top_planes = rep.perpendicular_blade;
  for (const auto& rp : rep.rotation_planes) top_planes = top_planes * rp.plane;
  const Multivector top = grade_projection(d.g, d.highest_grade);
  rep.residuals.top_grade_sign = scalar_product(top, reverse(top_planes)) < 0.0 ? -1.0 : 1.0;
  return rep;
}

Multivector rebuild_product(const AngleReport& report) {
  Multivector out = report.perpendicular_blade;
  for (const auto& rp : report.rotation_planes) {
    Multivector rotor = std::sin(rp.angle) * rp.plane;
    rotor[0] += std::cos(rp.angle);
    out = out * rotor;
  }
  return out;
}

}  // namespace clifangle
