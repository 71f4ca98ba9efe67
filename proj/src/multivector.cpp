#include "clifangle/multivector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clifangle/errors.hpp"
#include "clifangle/simd/kernels.hpp"

namespace clifangle {
namespace {

void check_dim(int n) {
  if (n < 1 || n > kMaxDim)
    throw Error(ErrorKind::InvalidArgument,
                "algebra dimension must be in [1, " + std::to_string(kMaxDim) +
                    "], got " + std::to_string(n));
}

void check_same_dim(const Multivector& lhs, const Multivector& rhs) {
  if (lhs.dim() != rhs.dim())
    throw Error(ErrorKind::DimensionMismatch,
                "multivectors live in Cl(" + std::to_string(lhs.dim()) + ") and Cl(" +
                    std::to_string(rhs.dim()) + ")");
}

// (-1)^{k(k-1)/2}
double reverse_sign(int k) { return ((k * (k - 1) / 2) & 1) ? -1.0 : 1.0; }

Multivector product(simd::ProductKind kind, const Multivector& lhs,
                    const Multivector& rhs) {
  check_same_dim(lhs, rhs);
  Multivector out(lhs.dim());
  simd::kernels().product(kind, lhs.dim(), lhs.coeffs().data(), rhs.coeffs().data(),
                          out.coeffs().data());
  return out;
}

bool has_grade(const Multivector& m, int k) {
  const auto c = m.coeffs();
  for (BasisBlade bits = 0; bits < c.size(); ++bits)
    if (grade_of(bits) == k && c[bits] != 0.0) return true;
  return false;
}

}  // namespace

std::uint64_t grade_dimension(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * static_cast<std::uint64_t>(n - k + i) / i;
  return result;
}

Multivector::Multivector(int n) : n_(n) {
  check_dim(n);
  coeffs_.assign(std::size_t{1} << n, 0.0);
}

Multivector::Multivector(int n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  check_dim(n);
  if (coeffs_.size() != (std::size_t{1} << n))
    throw Error(ErrorKind::InvalidArgument, "coefficient array must have length 2^n");
  if (!std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return std::isfinite(v); }))
    throw Error(ErrorKind::InvalidArgument, "multivector coefficients must be finite");
}

Multivector Multivector::scalar(int n, double value) {
  Multivector m(n);
  m.coeffs_[0] = value;
  return m;
}

Multivector Multivector::basis(int n, BasisBlade bits, double coeff) {
  Multivector m(n);
  if (bits >= m.size())
    throw Error(ErrorKind::InvalidArgument, "basis blade index out of range");
  m.coeffs_[bits] = coeff;
  return m;
}

Multivector Multivector::vector(std::span<const double> components) {
  return vector(static_cast<int>(components.size()), components);
}

Multivector Multivector::vector(int n, std::span<const double> components) {
  Multivector m(n);
  if (components.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::DimensionMismatch, "vector length does not match algebra dimension");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(components[i]))
      throw Error(ErrorKind::InvalidArgument, "vector components must be finite");
    m.coeffs_[BasisBlade{1} << i] = components[i];
  }
  return m;
}

Multivector Multivector::pseudoscalar(int n) {
  check_dim(n);
  return basis(n, (BasisBlade{1} << n) - 1);
}

std::vector<double> Multivector::vector_part() const {
  std::vector<double> v(n_);
  for (int i = 0; i < n_; ++i) v[i] = coeffs_[BasisBlade{1} << i];
  return v;
}

bool Multivector::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return v == 0.0; });
}

double Multivector::max_abs() const {
  double result = 0.0;
  for (double v : coeffs_) result = std::max(result, std::abs(v));
  return result;
}

Multivector& Multivector::operator+=(const Multivector& other) {
  check_same_dim(*this, other);
  simd::kernels().axpy(1.0, other.coeffs_.data(), coeffs_.data(), coeffs_.size());
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  check_same_dim(*this, other);
  simd::kernels().axpy(-1.0, other.coeffs_.data(), coeffs_.data(), coeffs_.size());
  return *this;
}

Multivector& Multivector::operator*=(double factor) {
  simd::kernels().scale(factor, coeffs_.data(), coeffs_.size());
  return *this;
}

Multivector& Multivector::operator/=(double divisor) {
  for (double& v : coeffs_) v /= divisor;
  return *this;
}

Multivector Multivector::operator-() const {
  Multivector m(*this);
  m *= -1.0;
  return m;
}

Multivector geometric_product(const Multivector& lhs, const Multivector& rhs) {
  return product(simd::ProductKind::geometric, lhs, rhs);
}

Multivector outer_product(const Multivector& lhs, const Multivector& rhs) {
  return product(simd::ProductKind::outer, lhs, rhs);
}

Multivector left_contraction(const Multivector& lhs, const Multivector& rhs) {
  return product(simd::ProductKind::left_contraction, lhs, rhs);
}

Multivector grade_projection(const Multivector& m, int k) {
  if (k < 0 || k > m.dim())
    throw Error(ErrorKind::InvalidArgument, "grade " + std::to_string(k) +
                                                " outside [0, " + std::to_string(m.dim()) + "]");
  Multivector out(m.dim());
  const auto src = m.coeffs();
  auto dst = out.coeffs();
  for (BasisBlade bits = 0; bits < src.size(); ++bits)
    if (grade_of(bits) == k) dst[bits] = src[bits];
  return out;
}

Multivector reverse(const Multivector& m) {
  Multivector out(m);
  auto c = out.coeffs();
  for (BasisBlade bits = 0; bits < c.size(); ++bits) c[bits] *= reverse_sign(grade_of(bits));
  return out;
}

double scalar_product(const Multivector& lhs, const Multivector& rhs) {
  check_same_dim(lhs, rhs);
  // Only e_A e_A contributes to the scalar part; in Cl(n,0) it equals the
  // reverse sign of grade(A).
  const auto a = lhs.coeffs();
  const auto b = rhs.coeffs();
  double acc = 0.0;
  for (BasisBlade bits = 0; bits < a.size(); ++bits)
    acc += reverse_sign(grade_of(bits)) * (a[bits] * b[bits]);
  return acc;
}

double modulus(const Multivector& m) {
  return std::sqrt(simd::kernels().sum_squares(m.coeffs().data(), m.size()));
}

std::vector<double> grade_norms(const Multivector& m) {
  std::vector<double> sq(m.dim() + 1, 0.0);
  const auto c = m.coeffs();
  for (BasisBlade bits = 0; bits < c.size(); ++bits) sq[grade_of(bits)] += c[bits] * c[bits];
  for (double& v : sq) v = std::sqrt(v);
  return sq;
}

Multivector dual(const Multivector& m) {
  return geometric_product(m, reverse(Multivector::pseudoscalar(m.dim())));
}

double double_dual_sign(int n) { return reverse_sign(n); }

Multivector reflect(const Multivector& x, const Multivector& normal) {
  check_same_dim(x, normal);
  for (int k = 0; k <= x.dim(); ++k)
    if (k != 1 && has_grade(x, k))
      throw Error(ErrorKind::InvalidArgument, "reflect expects a pure vector argument");
  const double norm_sq = scalar_product(normal, normal);
  if (norm_sq == 0.0 || !has_grade(normal, 1))
    throw Error(ErrorKind::InvalidArgument, "reflection needs a nonzero normal vector");
  const Multivector inverse = normal / norm_sq;
  return grade_projection(-(inverse * x * normal), 1);
}

Multivector versor_inverse(const Multivector& v) {
  const Multivector rev = reverse(v);
  const Multivector norm = v * rev;
  const double norm_sq = norm.scalar_part();
  const double total = modulus(v);
  if (total == 0.0 || norm_sq <= 0.0)
    throw Error(ErrorKind::InvalidArgument, "multivector is not invertible as a versor");
  Multivector residual = norm;
  residual[0] = 0.0;
  if (modulus(residual) > 1e-12 * total * total)
    throw Error(ErrorKind::InvalidArgument,
                "multivector is not a versor: V ~V has non-scalar parts");
  return rev / norm_sq;
}

Multivector rotor_apply(const Multivector& rotor, const Multivector& x) {
  check_same_dim(rotor, x);
  const Multivector moved = versor_inverse(rotor) * x * rotor;
  Multivector out(x.dim());
  for (int k = 0; k <= x.dim(); ++k)
    if (has_grade(x, k)) out += grade_projection(moved, k);
  return out;
}

std::string to_string(const Multivector& m, double threshold) {
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  const auto c = m.coeffs();
  for (int k = 0; k <= m.dim(); ++k) {
    for (BasisBlade bits = 0; bits < c.size(); ++bits) {
      if (grade_of(bits) != k || std::abs(c[bits]) <= threshold || c[bits] == 0.0) continue;
      const double v = c[bits];
      if (first) {
        if (v < 0) os << '-';
      } else {
        os << (v < 0 ? " - " : " + ");
      }
      first = false;
      os << std::abs(v);
      if (bits != 0) {
        os << '*';
        for (int i = 0; i < m.dim(); ++i)
          if (bits & (BasisBlade{1} << i)) os << 'e' << (i + 1);
      }
    }
  }
  return first ? "0" : os.str();
}

}  // namespace clifangle
