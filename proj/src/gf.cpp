#include "advflow/gf.hpp"

#include "advflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace advflow::gf {

bool is_prime(Elem n) {
  if (n < 2) return false;
  for (Elem d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Elem next_prime(Elem n) {
  Elem c = std::max<Elem>(n + 1, 2);
  while (!is_prime(c)) ++c;
  return c;
}

PrimeField::PrimeField(Elem q) : q_(q) {
  if (!is_prime(q)) throw FieldError("field size " + std::to_string(q) + " is not prime");
  if (q >= (Elem{1} << 24)) throw FieldError("field size must be below 2^24");
}

double PrimeField::bits() const { return std::log2(static_cast<double>(q_)); }

Elem PrimeField::pow(Elem a, std::uint64_t e) const {
  Elem base = reduce(a), acc = 1;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

Elem PrimeField::inv(Elem a) const {
  a = reduce(a);
  if (a == 0) throw FieldError("zero has no inverse");
  return pow(a, static_cast<std::uint64_t>(q_ - 2));
}

Matrix PrimeField::mul_impl(const Matrix& a, const Matrix& b) const {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix dimension mismatch");
  // Each term is below 2^48; chunk the inner dimension so sums stay below 2^63.
  constexpr Eigen::Index chunk = 1 << 14;
  if (a.cols() <= chunk) return reduce(a * b);
  Matrix acc = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index k = 0; k < a.cols(); k += chunk) {
    Eigen::Index len = std::min(chunk, a.cols() - k);
    acc = reduce(acc + reduce(a.middleCols(k, len) * b.middleRows(k, len)));
  }
  return acc;
}

Matrix vandermonde(const PrimeField& f, std::span<const Elem> points, Eigen::Index cols) {
  const auto rows = static_cast<Eigen::Index>(points.size());
  if (rows < 1 || cols < 1) throw std::invalid_argument("vandermonde dimensions must be positive");
  if (f.q() <= rows) throw FieldError("field size q must exceed the number of evaluation points");
  std::set<Elem> seen;
  for (Elem p : points) {
    if (p < 0 || p >= f.q()) throw FieldError("evaluation point out of range");
    if (!seen.insert(p).second) throw FieldError("duplicate evaluation point " + std::to_string(p));
  }
  Matrix v(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    Elem acc = 1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      v(i, j) = acc;
      acc = f.mul(acc, points[static_cast<std::size_t>(i)]);
    }
  }
  return v;
}

RowVector hash_row(const PrimeField& f, Elem rho, Eigen::Index length) {
  if (length < 1) throw std::invalid_argument("hash row length must be >= 1");
  RowVector u(length);
  Elem acc = 1;
  for (Eigen::Index j = 0; j < length; ++j) {
    u(j) = acc;
    acc = f.mul(acc, rho);
  }
  return u;
}

namespace {

// In-place reduced row echelon form on [a | b]; returns pivot columns of a.
// Updates are rank-1 block subtractions. Entries are only reduced mod q when
// accumulated terms approach the int64 range.
std::vector<Eigen::Index> eliminate(const PrimeField& f, Matrix& a, Matrix* b, Elem* det = nullptr) {
  const Elem q = f.q();
  const Elem headroom = std::max<Elem>(1, (Elem{1} << 62) / (q * q));
  Elem pending = 0;
  auto reduce_all = [&] {
    a = f.reduce(a);
    if (b) *b = f.reduce(*b);
    pending = 0;
  };

  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  if (det) *det = 1;
  for (Eigen::Index c = 0; c < a.cols() && r < a.rows(); ++c) {
    Eigen::Index p = r;
    while (p < a.rows() && f.reduce(a(p, c)) == 0) ++p;
    if (p == a.rows()) {
      if (det) *det = 0;
      continue;
    }
    if (p != r) {
      a.row(p).swap(a.row(r));
      if (b) b->row(p).swap(b->row(r));
      if (det) *det = f.neg(*det);
    }
    const Eigen::Index width = a.cols() - c;
    Elem pivot = f.reduce(a(r, c));
    if (det) *det = f.mul(*det, pivot);
    Elem inv = f.inv(pivot);
    a.row(r).tail(width) = f.reduce(f.reduce(a.row(r).tail(width)) * inv);
    if (b) b->row(r) = f.reduce(f.reduce(b->row(r)) * inv);

    Vector factors = f.reduce(a.col(c));
    factors(r) = 0;
    if (!factors.isZero()) {
      const RowVector prow = a.row(r).tail(width);
      a.rightCols(width).noalias() -= factors * prow;
      if (b) {
        const RowVector brow = b->row(r);
        b->noalias() -= factors * brow;
      }
      if (++pending >= headroom) reduce_all();
    }
    pivots.push_back(c);
    ++r;
  }
  reduce_all();
  return pivots;
}

}  // namespace

Eigen::Index rank_impl(const PrimeField& f, Matrix a) {
  return static_cast<Eigen::Index>(eliminate(f, a, nullptr).size());
}

Elem determinant_impl(const PrimeField& f, Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant needs a square matrix");
  Elem det = 1;
  auto piv = eliminate(f, a, nullptr, &det);
  return static_cast<Eigen::Index>(piv.size()) == a.rows() ? det : 0;
}

Matrix invert_impl(const PrimeField& f, Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("invert needs a square matrix");
  Matrix inv = Matrix::Identity(a.rows(), a.cols());
  auto piv = eliminate(f, a, &inv);
  if (static_cast<Eigen::Index>(piv.size()) != a.rows()) throw SingularMatrix("matrix is singular");
  return inv;
}

Matrix solve(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve needs a square matrix");
  auto sol = solve_system(f, a, b);
  if (sol.status != SystemStatus::Unique) throw SingularMatrix("matrix is singular");
  return sol.x;
}

SystemSolution solve_system(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("right-hand side has wrong row count");
  Matrix ar = f.reduce(a), br = f.reduce(b);
  auto piv = eliminate(f, ar, &br);
  const auto rank = static_cast<Eigen::Index>(piv.size());
  SystemSolution out;
  if (rank < ar.rows() && !br.bottomRows(ar.rows() - rank).isZero()) {
    out.status = SystemStatus::Inconsistent;
    return out;
  }
  if (rank < ar.cols()) {
    out.status = SystemStatus::Underdetermined;
    return out;
  }
  out.x = br.topRows(ar.cols());
  return out;
}

}  // namespace advflow::gf
