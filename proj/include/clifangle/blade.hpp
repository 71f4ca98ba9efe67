#pragma once

// Blades built from spanning vectors, with their orthogonal factorization
// A = |A| a1 a2 ... ar (ai orthonormal, geometric product).

#include <span>
#include <vector>

#include "clifangle/multivector.hpp"

namespace clifangle {

using RealVector = std::vector<double>;

inline constexpr double kDefaultRankTolerance = 1e-10;

// r vectors of R^n, 1 <= r <= n.
struct SpanningSet {
  int n = 0;
  std::vector<RealVector> vectors;

  int rank() const { return static_cast<int>(vectors.size()); }
  bool operator==(const SpanningSet&) const = default;
};

// Checks the SpanningSet invariants (dimension range, 1 <= r <= n, vector
// lengths, finite and nonzero entries). Throws InvalidArgument or
// DimensionMismatch.
void validate(const SpanningSet& s);

struct OrthogonalFactorization {
  double magnitude = 0.0;
  std::vector<RealVector> factors;
};

// Modified Gram-Schmidt in input order. The magnitude is the product of the
// residual norms, i.e. the r-volume spanned by the inputs. A vector whose
// residual falls below tol_rank times the largest input norm raises
// DegenerateSpan.
OrthogonalFactorization orthogonal_factorization(std::span<const RealVector> vectors,
                                                 double tol_rank = kDefaultRankTolerance);

class Blade {
 public:
  const Multivector& mv() const { return mv_; }
  int grade() const { return grade_; }
  int dim() const { return mv_.dim(); }
  double magnitude() const { return magnitude_; }
  const std::vector<RealVector>& ortho_factors() const { return factors_; }

 private:
  Blade(Multivector mv, int grade, double magnitude, std::vector<RealVector> factors)
      : mv_(std::move(mv)), grade_(grade), magnitude_(magnitude), factors_(std::move(factors)) {}

  friend Blade blade_from_spanning(const SpanningSet&, double);
  friend Blade unit_blade(const Blade&);

  Multivector mv_;
  int grade_;
  double magnitude_;
  std::vector<RealVector> factors_;
};

// v1 ^ v2 ^ ... ^ vr, with factorization. Swapping two inputs negates mv.
Blade blade_from_spanning(const SpanningSet& s, double tol_rank = kDefaultRankTolerance);

// |x ^ A| <= tol |x| |A|. The zero vector belongs to every subspace.
bool subspace_membership(std::span<const double> x, const Blade& blade, double tol = 1e-10);

// Same factors, magnitude one. Throws ZeroBlade for a zero magnitude.
Blade unit_blade(const Blade& blade);

// magnitude * (f1 f2 ... fr) as a geometric product.
Multivector product_of_factors(const Blade& blade);

}  // namespace clifangle
