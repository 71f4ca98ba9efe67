#include "clifangle/blade.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clifangle/errors.hpp"
#include "clifangle/simd/kernels.hpp"

namespace clifangle {
namespace {

// Residual norm below this fraction of the input norm triggers a second
// projection pass.
constexpr double kReorthogonalizeBelow = 1e-6;

double norm(std::span<const double> v) {
  return std::sqrt(simd::kernels().sum_squares(v.data(), v.size()));
}

}  // namespace

void validate(const SpanningSet& s) {
  if (s.n < 1 || s.n > kMaxDim)
    throw Error(ErrorKind::InvalidArgument, "dimension n must be in [1, 16]");
  if (s.vectors.empty() || s.rank() > s.n)
    throw Error(ErrorKind::InvalidArgument,
                "spanning set needs between 1 and n vectors, got " + std::to_string(s.rank()));
  for (const RealVector& v : s.vectors) {
    if (v.size() != static_cast<std::size_t>(s.n))
      throw Error(ErrorKind::DimensionMismatch,
                  "spanning vector has " + std::to_string(v.size()) + " entries, expected " +
                      std::to_string(s.n));
    if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }))
      throw Error(ErrorKind::InvalidArgument, "spanning vector has non-finite entries");
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
      throw Error(ErrorKind::DegenerateSpan, "spanning set contains a zero vector");
  }
}

OrthogonalFactorization orthogonal_factorization(std::span<const RealVector> vectors,
                                                 double tol_rank) {
  const auto& k = simd::kernels();
  double largest = 0.0;
  for (const RealVector& v : vectors) largest = std::max(largest, norm(v));
  if (largest == 0.0) throw Error(ErrorKind::DegenerateSpan, "all spanning vectors are zero");
  if (!std::isfinite(largest))
    throw Error(ErrorKind::NumericalFailure, "spanning vector norm overflows double precision");

  OrthogonalFactorization out;
  out.magnitude = 1.0;
  for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
    RealVector w = vectors[idx];
    const double input_norm = norm(w);
    for (int pass = 0; pass < 2; ++pass) {
      for (const RealVector& q : out.factors)
        k.axpy(-k.dot(q.data(), w.data(), w.size()), q.data(), w.data(), w.size());
      if (norm(w) >= kReorthogonalizeBelow * input_norm) break;
    }
    const double residual = norm(w);
    if (residual < tol_rank * largest)
      throw Error(ErrorKind::DegenerateSpan,
                  "spanning vector " + std::to_string(idx + 1) +
                      " is linearly dependent on the previous ones");
    k.scale(1.0 / residual, w.data(), w.size());
    out.magnitude *= residual;
    out.factors.push_back(std::move(w));
  }
  return out;
}

Blade blade_from_spanning(const SpanningSet& s, double tol_rank) {
  validate(s);
  OrthogonalFactorization f = orthogonal_factorization(s.vectors, tol_rank);
  Multivector mv = Multivector::scalar(s.n, 1.0);
  for (const RealVector& v : s.vectors) mv = outer_product(mv, Multivector::vector(s.n, v));
  return Blade(std::move(mv), s.rank(), f.magnitude, std::move(f.factors));
}

bool subspace_membership(std::span<const double> x, const Blade& blade, double tol) {
  if (x.size() != static_cast<std::size_t>(blade.dim()))
    throw Error(ErrorKind::DimensionMismatch, "vector length does not match blade dimension");
  const double x_norm = norm(x);
  if (x_norm == 0.0) return true;
  const Multivector wedge = outer_product(Multivector::vector(blade.dim(), x), blade.mv());
  return modulus(wedge) <= tol * x_norm * blade.magnitude();
}

Blade unit_blade(const Blade& blade) {
  if (!(blade.magnitude() > 0.0)) throw Error(ErrorKind::ZeroBlade, "cannot normalize a zero blade");
  return Blade(blade.mv() / blade.magnitude(), blade.grade(), 1.0, blade.ortho_factors());
}

Multivector product_of_factors(const Blade& blade) {
  Multivector out = Multivector::scalar(blade.dim(), blade.magnitude());
  for (const RealVector& f : blade.ortho_factors())
    out = geometric_product(out, Multivector::vector(blade.dim(), f));
  return out;
}

}  // namespace clifangle
