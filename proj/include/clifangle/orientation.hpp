#pragma once

// Relative orientation of two r-dimensional subspaces from the single
// geometric product G = unit(A) ~unit(B) of their blades.
//
// Written in principal vectors, G = (a1 b1)(a2 b2)...(ar br), a product of
// commuting rotors cos(theta_k) + i_k sin(theta_k) in mutually orthogonal
// planes i_k. Hence:
//   <G>_0                 = prod cos(theta_k)  (signed by blade orientation)
//   lowest grade present  = 2t, t = number of right angles
//   highest grade present = 2(r - s), s = dimension of the intersection
//   modulus of the top grade part = product of the nonzero sines
// Dividing G by its lowest grade part leaves scalar 1 plus a bivector
// sum_k tan(theta_k) i_k over the angles strictly between 0 and pi/2;
// splitting that bivector into orthogonal planes yields the remaining angles.

#include <vector>

#include "clifangle/blade.hpp"
#include "clifangle/multivector.hpp"

namespace clifangle {

struct Tolerances {
  double grade = 1e-10;   // a grade part counts as present above this modulus
  double angle = 1e-9;    // classification of zero and right angles
  double split = 1e-9;    // relative reconstruction residual of bivector_split
};

struct PlaneComponent {
  double sigma;       // weight, > 0
  Multivector plane;  // unit 2-blade u ^ v
  RealVector u;
  RealVector v;
};

// Splits a grade-2 multivector into sum_k sigma_k u_k ^ v_k with orthonormal
// {u_k, v_k} across all k, sigma descending. Components with
// sigma <= min_sigma are dropped (treated as absent). Throws SplitFailure
// when the reconstruction residual exceeds tol_split * |F| and
// InvalidArgument when F has parts of other grades.
std::vector<PlaneComponent> bivector_split(const Multivector& f, double tol_split = 1e-9,
                                           double min_sigma = 0.0);

struct ProductDecomposition {
  Multivector g{1};                  // unit(A) ~unit(B)
  std::vector<double> grade_norms;   // indexed by grade 0..n
  int lowest_grade = 0;              // 2t
  int highest_grade = 0;             // 2(r - s)
  int s_intersection = 0;
  int t_perpendicular = 0;
  double odd_grade_leakage = 0.0;    // modulus of all odd-grade parts
  double excess_grade_leakage = 0.0; // modulus above grade 2 min(r, n/2)
};

// <A ~B>_0 / (|A| |B|). Throws GradeMismatch, DimensionMismatch, ZeroBlade.
double cos_angle(const Blade& a, const Blade& b);

// |<A ~B>_{2r}| / (|A| |B|), the product of all principal sines. When 2r > n
// the subspaces must intersect and the grade-2r part does not exist; the
// result is 0.
double sin_product(const Blade& a, const Blade& b);

ProductDecomposition decompose_product(const Blade& a, const Blade& b,
                                       const Tolerances& tol = {});

struct AngleReport {
  int r = 0;
  int n = 0;
  double cos_total = 0.0;              // signed
  double sin_product_abs = 0.0;        // modulus of the top grade part of G
  int s_intersection = 0;              // angles below tol.angle
  int t_perpendicular = 0;             // angles within tol.angle of pi/2
  std::vector<double> principal_angles;  // descending

  struct RotationPlane {
    double angle;       // strictly between 0 and pi/2
    double tangent;     // weight from the bivector split
    Multivector plane;  // unit 2-blade
  };
  // Angles recovered from tangents, descending.
  std::vector<RotationPlane> rotation_planes;

  // Unit planes in descending angle order: the perpendicular plane first
  // when t == 1 (for t > 1 the perpendicular planes are not unique and only
  // perpendicular_blade is reported), then the rotation planes.
  std::vector<Multivector> principal_planes;
  // Unit 2t-blade of the perpendicular pairs (the lowest grade part of G
  // normalized, sign included). Scalar +-1 when t == 0.
  Multivector perpendicular_blade{1};

  // Grade-based counts from the product decomposition.
  int grade_s = 0;
  int grade_t = 0;
  std::vector<double> grade_norms;

  struct Residuals {
    double odd_grade_leakage = 0.0;
    double excess_grade_leakage = 0.0;
    double lowest_grade_blade = 0.0;  // | L~L / |L|^2 - 1 |
    double split = 0.0;               // bivector split reconstruction, relative
    double reconstruction = 0.0;      // max coefficient |rotor product - G|
    double cos_consistency = 0.0;     // | prod cos(theta) - |cos_total| |
    double sin_consistency = 0.0;     // | prod_{theta>0} sin(theta) - sin_product_abs |
    // Sign of the top grade part relative to the rebuilt plane product; the
    // sine-product formula only fixes the magnitude.
    double top_grade_sign = 1.0;
    bool sin_formula_available = true;  // false when 2r > n
  } residuals;
};

// Throws GradeMismatch, DimensionMismatch, ZeroBlade, SplitFailure,
// NumericalFailure.
AngleReport full_orientation(const Blade& a, const Blade& b, const Tolerances& tol = {});

// L * prod_k (cos theta_k + sin theta_k i_k) for the planes and angles in a
// report: the rotor form of G rebuilt from the extracted quantities.
Multivector rebuild_product(const AngleReport& report);

}  // namespace clifangle
