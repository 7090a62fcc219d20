#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace advflow::gf {

/// Field elements are stored as canonical residues in [0, q).
using Elem = std::int64_t;
using Matrix = Eigen::Matrix<Elem, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Elem, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Elem, 1, Eigen::Dynamic>;

bool is_prime(Elem n);

/// Smallest prime strictly greater than `n`.
Elem next_prime(Elem n);

/// Arithmetic context for the prime field F_q. Matrices do not carry the
/// modulus; every operation takes the field explicitly.
class PrimeField {
 public:
  /// q must be prime and below 2^24 so that Eigen integer products of
  /// reduced operands cannot overflow before reduction.
  explicit PrimeField(Elem q);

  Elem q() const { return q_; }
  /// Bits per symbol, log2(q).
  double bits() const;

  Elem reduce(Elem a) const {
    Elem r = a % q_;
    return r < 0 ? r + q_ : r;
  }
  Elem add(Elem a, Elem b) const { return reduce(a + b); }
  Elem sub(Elem a, Elem b) const { return reduce(a - b); }
  Elem mul(Elem a, Elem b) const { return reduce(a * b); }
  Elem neg(Elem a) const { return reduce(-a); }
  Elem pow(Elem a, std::uint64_t e) const;
  /// Throws FieldError for zero.
  Elem inv(Elem a) const;

  template <typename Derived>
  Matrix reduce(const Eigen::MatrixBase<Derived>& m) const {
    const Elem q = q_;
    return m.template cast<Elem>().unaryExpr([q](Elem v) {
      Elem r = v % q;
      return r < 0 ? r + q : r;
    });
  }

  /// Product of reduced operands, reduced.
  template <typename A, typename B>
  Matrix mul(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) const {
    return mul_impl(a.eval(), b.eval());
  }

 private:
  Matrix mul_impl(const Matrix& a, const Matrix& b) const;
  Elem q_;
};

/// Entry (i, j) = points[i]^j. Points must be distinct residues and q must
/// exceed the number of rows.
Matrix vandermonde(const PrimeField& f, std::span<const Elem> points, Eigen::Index cols);

/// [1, rho, rho^2, ..., rho^(length-1)].
RowVector hash_row(const PrimeField& f, Elem rho, Eigen::Index length);

Eigen::Index rank_impl(const PrimeField& f, Matrix a);
Matrix invert_impl(const PrimeField& f, Matrix a);
Elem determinant_impl(const PrimeField& f, Matrix a);

template <typename Derived>
Eigen::Index rank(const PrimeField& f, const Eigen::MatrixBase<Derived>& a) {
  return rank_impl(f, f.reduce(a));
}

/// Throws SingularMatrix when `a` is not invertible.
template <typename Derived>
Matrix invert(const PrimeField& f, const Eigen::MatrixBase<Derived>& a) {
  return invert_impl(f, f.reduce(a));
}

template <typename Derived>
Elem determinant(const PrimeField& f, const Eigen::MatrixBase<Derived>& a) {
  return determinant_impl(f, f.reduce(a));
}

/// Solves a square nonsingular system; throws SingularMatrix otherwise.
Matrix solve(const PrimeField& f, const Matrix& a, const Matrix& b);

enum class SystemStatus { Unique, Inconsistent, Underdetermined };

struct SystemSolution {
  SystemStatus status = SystemStatus::Unique;
  Matrix x;  // filled only for Unique
};

/// Solves a possibly tall system a * x = b exactly. Reports inconsistency
/// (no solution) and rank deficiency (more than one solution) separately.
SystemSolution solve_system(const PrimeField& f, const Matrix& a, const Matrix& b);

}  // namespace advflow::gf
