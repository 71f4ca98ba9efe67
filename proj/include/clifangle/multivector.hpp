#pragma once

// Dense multivectors of the Euclidean Clifford algebra Cl(n,0).
//
// A multivector stores all 2^n coefficients. Coefficient k belongs to the
// basis blade whose factors are the set bits of k in ascending order, so bit
// 0 is e1, bit 1 is e2, and index 0b101 is e1e3. The grade of a basis blade
// is the popcount of its index.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace clifangle {

inline constexpr int kMaxDim = 16;

using BasisBlade = unsigned;

inline int grade_of(BasisBlade bits) { return __builtin_popcount(bits); }

// Number of basis blades of grade k in Cl(n): the binomial coefficient C(n, k).
std::uint64_t grade_dimension(int n, int k);

class Multivector {
 public:
  // The zero multivector of Cl(n). Throws InvalidArgument unless 1 <= n <= kMaxDim.
  explicit Multivector(int n);
  // Takes ownership of 2^n coefficients; all must be finite.
  Multivector(int n, std::vector<double> coeffs);

  static Multivector scalar(int n, double value);
  static Multivector basis(int n, BasisBlade bits, double coeff = 1.0);
  // Grade-1 element sum_i v[i] e_{i+1} of Cl(v.size()).
  static Multivector vector(std::span<const double> components);
  static Multivector vector(int n, std::span<const double> components);
  // e1 e2 ... en
  static Multivector pseudoscalar(int n);

  int dim() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  double operator[](BasisBlade bits) const { return coeffs_[bits]; }
  double& operator[](BasisBlade bits) { return coeffs_[bits]; }

  double scalar_part() const { return coeffs_[0]; }
  // Grade-1 coefficients as an n-array.
  std::vector<double> vector_part() const;
  bool is_zero() const;
  // Largest absolute coefficient.
  double max_abs() const;

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(double factor);
  Multivector& operator/=(double divisor);

  friend Multivector operator+(Multivector lhs, const Multivector& rhs) { return lhs += rhs; }
  friend Multivector operator-(Multivector lhs, const Multivector& rhs) { return lhs -= rhs; }
  friend Multivector operator*(Multivector lhs, double factor) { return lhs *= factor; }
  friend Multivector operator*(double factor, Multivector rhs) { return rhs *= factor; }
  friend Multivector operator/(Multivector lhs, double divisor) { return lhs /= divisor; }
  Multivector operator-() const;

  bool operator==(const Multivector&) const = default;

 private:
  int n_;
  std::vector<double> coeffs_;
};

Multivector geometric_product(const Multivector& lhs, const Multivector& rhs);
Multivector outer_product(const Multivector& lhs, const Multivector& rhs);
// A _| B; for homogeneous grades r <= s this is the grade s-r part of AB.
Multivector left_contraction(const Multivector& lhs, const Multivector& rhs);

inline Multivector operator*(const Multivector& lhs, const Multivector& rhs) {
  return geometric_product(lhs, rhs);
}

// <M>_k. Throws InvalidArgument unless 0 <= k <= n.
Multivector grade_projection(const Multivector& m, int k);

// Each grade-k part scaled by (-1)^{k(k-1)/2}.
Multivector reverse(const Multivector& m);

// <MN>_0 of the raw arguments. Pass reverse(N) to get the M * ~N form.
double scalar_product(const Multivector& lhs, const Multivector& rhs);

// sqrt(<M ~M>_0), the Euclidean norm of the coefficient array.
double modulus(const Multivector& m);

// modulus of every grade part, indexed by grade 0..n.
std::vector<double> grade_norms(const Multivector& m);

// Right multiplication by the inverse unit pseudoscalar, M i_n^{-1} with
// i_n^{-1} = ~i_n. Applying it twice multiplies by (-1)^{n(n-1)/2}.
Multivector dual(const Multivector& m);

// Sign picked up by dual(dual(M)) in Cl(n).
double double_dual_sign(int n);

// -a^{-1} x a: flips the component of vector x along the normal a.
Multivector reflect(const Multivector& x, const Multivector& normal);

// R^{-1} x R for an invertible versor R (R ~R scalar and nonzero).
Multivector rotor_apply(const Multivector& rotor, const Multivector& x);

// ~V / <V ~V>_0 for a versor or blade V.
Multivector versor_inverse(const Multivector& v);

// Human-readable form such as "1 + 2*e1 - 0.5*e1e3"; terms with
// |coeff| <= threshold are dropped.
std::string to_string(const Multivector& m, double threshold = 0.0);

}  // namespace clifangle
