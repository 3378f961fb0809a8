#include "cqed/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cqed {

namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet>& triplets) {
  // Sorting fixes the summation order of duplicates, so assembly is bit-stable.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
  });
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

SparseMatrix sparse_identity(int n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

}  // namespace

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("HilbertSpace: at least one factor required");
  std::set<std::string> labels;
  total_dim_ = 1;
  for (const auto& f : factors_) {
    if (f.dim < 1) throw std::invalid_argument("HilbertSpace: factor '" + f.label + "' has dimension < 1");
    if (!labels.insert(f.label).second) throw std::invalid_argument("HilbertSpace: duplicate label '" + f.label + "'");
    if (f.kind == FactorKind::atom && (f.ground_levels < 1 || f.ground_levels > f.dim))
      throw std::invalid_argument("HilbertSpace: atom factor '" + f.label + "' needs 1 <= ground_levels <= dim");
    total_dim_ *= f.dim;
  }
}

HilbertSpace HilbertSpace::cavity_qed(int n_z, int n_y) {
  if (n_z < 0 || n_y < 0) throw std::invalid_argument("cavity_qed: negative photon cutoff");
  return HilbertSpace({{"atom", 20, FactorKind::atom, 9},
                       {"mode_z", n_z + 1, FactorKind::mode, 0},
                       {"mode_y", n_y + 1, FactorKind::mode, 0}});
}

HilbertSpace HilbertSpace::jaynes_cummings(int n) {
  if (n < 0) throw std::invalid_argument("jaynes_cummings: negative photon cutoff");
  return HilbertSpace({{"atom", 2, FactorKind::atom, 1}, {"mode_z", n + 1, FactorKind::mode, 0}});
}

HilbertSpace HilbertSpace::single(std::string label, int dim, FactorKind kind, int ground_levels) {
  return HilbertSpace({{std::move(label), dim, kind, ground_levels}});
}

bool HilbertSpace::has(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(), [&](const Factor& f) { return f.label == label; });
}

int HilbertSpace::position(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return static_cast<int>(i);
  throw std::invalid_argument("HilbertSpace: no factor labelled '" + label + "'");
}

const Factor& HilbertSpace::factor(const std::string& label) const { return factors_[position(label)]; }

std::vector<int> HilbertSpace::digits(int index) const {
  if (index < 0 || index >= total_dim_) throw std::out_of_range("HilbertSpace::digits: index out of range");
  std::vector<int> d(factors_.size());
  for (int i = static_cast<int>(factors_.size()) - 1; i >= 0; --i) {
    d[i] = index % factors_[i].dim;
    index /= factors_[i].dim;
  }
  return d;
}

int HilbertSpace::index(const std::vector<int>& digits) const {
  if (digits.size() != factors_.size()) throw std::invalid_argument("HilbertSpace::index: wrong digit count");
  int idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= factors_[i].dim) throw std::out_of_range("HilbertSpace::index: digit out of range");
    idx = idx * factors_[i].dim + digits[i];
  }
  return idx;
}

int HilbertSpace::excitations(int index) const {
  const auto d = digits(index);
  int n = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].kind == FactorKind::mode)
      n += d[i];
    else if (d[i] >= factors_[i].ground_levels)
      n += 1;
  }
  return n;
}

int HilbertSpace::complete_manifold_limit() const {
  int limit = -1;
  for (const auto& f : factors_)
    if (f.kind == FactorKind::mode) limit = limit < 0 ? f.dim - 1 : std::min(limit, f.dim - 1);
  // Without modes only the atomic excitation (0 or 1) is available.
  return limit < 0 ? 1 : limit;
}

Operator::Operator(HilbertSpace space, SparseMatrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.total_dim() || matrix_.cols() != space_.total_dim())
    throw std::invalid_argument("Operator: matrix dimension does not match space");
  matrix_.makeCompressed();
}

Operator Operator::zero(const HilbertSpace& space) {
  return Operator(space, SparseMatrix(space.total_dim(), space.total_dim()));
}

Operator Operator::identity(const HilbertSpace& space) { return Operator(space, sparse_identity(space.total_dim())); }

Operator Operator::adjoint() const { return Operator(space_, SparseMatrix(matrix_.adjoint())); }

Complex Operator::trace() const {
  Complex t = 0.0;
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it)
      if (it.row() == it.col()) t += it.value();
  return t;
}

double Operator::norm() const { return matrix_.norm(); }

bool Operator::is_hermitian(double tol) const {
  return SparseMatrix(matrix_ - SparseMatrix(matrix_.adjoint())).norm() <= tol * std::max(1.0, norm());
}

void Operator::require_same_space(const Operator& rhs) const {
  if (!(space_ == rhs.space_)) throw std::invalid_argument("Operator: operands live on different spaces");
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_space(rhs);
  matrix_ += rhs.matrix_;
  matrix_.makeCompressed();
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_space(rhs);
  matrix_ -= rhs.matrix_;
  matrix_.makeCompressed();
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  matrix_ *= s;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  lhs.require_same_space(rhs);
  return Operator(lhs.space_, SparseMatrix(lhs.matrix_ * rhs.matrix_));
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib)
          t.emplace_back(static_cast<int>(ia.row() * b.rows() + ib.row()),
                         static_cast<int>(ia.col() * b.cols() + ib.col()), ia.value() * ib.value());
  return from_triplets(static_cast<int>(a.rows() * b.rows()), static_cast<int>(a.cols() * b.cols()), t);
}

Operator annihilation(int n_max) {
  if (n_max < 1) throw std::invalid_argument("annihilation: photon cutoff must be >= 1");
  std::vector<Triplet> t;
  for (int n = 1; n <= n_max; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  return Operator(HilbertSpace::single("mode", n_max + 1), from_triplets(n_max + 1, n_max + 1, t));
}

Operator embed(const SparseMatrix& op, const std::string& target, const HilbertSpace& space) {
  const int pos = space.position(target);
  const auto& factors = space.factors();
  if (op.rows() != factors[pos].dim || op.cols() != factors[pos].dim)
    throw std::invalid_argument("embed: operator dimension does not match factor '" + target + "'");
  SparseMatrix result = pos == 0 ? op : sparse_identity(factors[0].dim);
  for (std::size_t i = 1; i < factors.size(); ++i)
    result = kron(result, static_cast<int>(i) == pos ? op : sparse_identity(factors[i].dim));
  return Operator(space, std::move(result));
}

Operator embed(const Operator& op, const std::string& target, const HilbertSpace& space) {
  return embed(op.matrix(), target, space);
}

Operator excitation_number(const HilbertSpace& space) {
  std::vector<Triplet> t;
  for (int i = 0; i < space.total_dim(); ++i) {
    const int n = space.excitations(i);
    if (n != 0) t.emplace_back(i, i, static_cast<double>(n));
  }
  return Operator(space, from_triplets(space.total_dim(), space.total_dim(), t));
}

}  // namespace cqed
