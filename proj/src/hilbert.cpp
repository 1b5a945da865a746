#include "duality/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace duality {

namespace {

void check_finite(const std::vector<Complex>& amps) {
  for (const Complex& a : amps)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("ComplexVector: non-finite amplitude");
}

}  // namespace

ComplexVector::ComplexVector(std::size_t dim) : amps_(dim, Complex(0.0, 0.0)) {
  if (dim == 0) throw std::invalid_argument("ComplexVector: dimension must be positive");
}

ComplexVector::ComplexVector(std::initializer_list<Complex> amplitudes)
    : amps_(amplitudes) {
  if (amps_.empty()) throw std::invalid_argument("ComplexVector: dimension must be positive");
  check_finite(amps_);
}

ComplexVector::ComplexVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw std::invalid_argument("ComplexVector: dimension must be positive");
  check_finite(amps_);
}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("ComplexVector::basis: index out of range");
  ComplexVector v(dim);
  v[index] = Complex(1.0, 0.0);
  return v;
}

double ComplexVector::norm_sq() const {
  double total = 0.0;
  for (const Complex& a : amps_) total += std::norm(a);
  return total;
}

double ComplexVector::norm() const { return std::sqrt(norm_sq()); }

bool ComplexVector::is_normalized(double tolerance) const {
  return std::abs(norm_sq() - 1.0) <= tolerance;
}

ComplexVector ComplexVector::normalized() const {
  const double n = norm();
  if (n <= 0.0 || !std::isfinite(n))
    throw std::domain_error("ComplexVector::normalized: zero vector");
  ComplexVector result = *this;
  result *= Complex(1.0 / n, 0.0);
  return result;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& rhs) {
  if (dim() != rhs.dim()) throw std::invalid_argument("ComplexVector: dimension mismatch");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += rhs.amps_[i];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& rhs) {
  if (dim() != rhs.dim()) throw std::invalid_argument("ComplexVector: dimension mismatch");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] -= rhs.amps_[i];
  return *this;
}

ComplexVector& ComplexVector::operator*=(Complex factor) {
  for (Complex& a : amps_) a *= factor;
  return *this;
}

ComplexVector operator+(ComplexVector lhs, const ComplexVector& rhs) { return lhs += rhs; }
ComplexVector operator-(ComplexVector lhs, const ComplexVector& rhs) { return lhs -= rhs; }
ComplexVector operator*(ComplexVector v, Complex factor) { return v *= factor; }
ComplexVector operator*(Complex factor, ComplexVector v) { return v *= factor; }

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0, 0.0);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix result(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) result(c, r) = std::conj((*this)(r, c));
  return result;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
  ComplexMatrix result(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex a = (*this)(r, k);
      for (std::size_t c = 0; c < rhs.cols_; ++c) result(r, c) += a * rhs(k, c);
    }
  return result;
}

ComplexVector ComplexMatrix::apply(const ComplexVector& v) const {
  if (cols_ != v.dim()) throw std::invalid_argument("ComplexMatrix::apply: dimension mismatch");
  ComplexVector result(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex acc(0.0, 0.0);
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    result[r] = acc;
  }
  return result;
}

Complex ComplexMatrix::trace() const {
  if (rows_ != cols_) throw std::invalid_argument("ComplexMatrix::trace: matrix must be square");
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) acc += (*this)(i, i);
  return acc;
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const Complex& e : entries_) best = std::max(best, std::abs(e));
  return best;
}

double ComplexMatrix::unitarity_error() const {
  if (rows_ != cols_)
    throw std::invalid_argument("ComplexMatrix::unitarity_error: matrix must be square");
  ComplexMatrix gram = adjoint() * (*this);
  for (std::size_t i = 0; i < rows_; ++i) gram(i, i) -= Complex(1.0, 0.0);
  return gram.max_abs();
}

double ComplexMatrix::hermiticity_error() const {
  if (rows_ != cols_)
    throw std::invalid_argument("ComplexMatrix::hermiticity_error: matrix must be square");
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      best = std::max(best, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return best;
}

QuantonEnvironmentState::QuantonEnvironmentState(ComplexVector chi1, ComplexVector chi2)
    : chi1_(std::move(chi1)), chi2_(std::move(chi2)) {
  if (chi1_.dim() != chi2_.dim())
    throw std::invalid_argument("QuantonEnvironmentState: chi dimensions differ");
  const std::size_t d = chi1_.dim();
  if (d != 1 && d != 2 && d != 4)
    throw std::invalid_argument("QuantonEnvironmentState: environment dim must be 1, 2 or 4");
}

QuantonEnvironmentState QuantonEnvironmentState::make_normalized(ComplexVector chi1,
                                                                 ComplexVector chi2) {
  QuantonEnvironmentState state(std::move(chi1), std::move(chi2));
  const double total = state.total_norm_sq();
  if (total <= 0.0 || !std::isfinite(total))
    throw std::invalid_argument("QuantonEnvironmentState: cannot normalize zero state");
  const double scale = 1.0 / std::sqrt(total);
  state.chi1_ *= Complex(scale, 0.0);
  state.chi2_ *= Complex(scale, 0.0);
  state.norm_correction_ = std::abs(1.0 - scale);
  return state;
}

const ComplexVector& QuantonEnvironmentState::chi(int path) const {
  if (path == 1) return chi1_;
  if (path == 2) return chi2_;
  throw std::invalid_argument("QuantonEnvironmentState::chi: path must be 1 or 2");
}

double QuantonEnvironmentState::total_norm_sq() const {
  return chi1_.norm_sq() + chi2_.norm_sq();
}

bool QuantonEnvironmentState::is_normalized(double tolerance) const {
  return std::abs(total_norm_sq() - 1.0) <= tolerance;
}

Complex inner(const ComplexVector& u, const ComplexVector& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("inner: dimension mismatch");
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < u.dim(); ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

ComplexVector tensor(const ComplexVector& u, const ComplexVector& v) {
  ComplexVector result(u.dim() * v.dim());
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t k = 0; k < v.dim(); ++k) result[i * v.dim() + k] = u[i] * v[k];
  return result;
}

ComplexMatrix partial_trace(const QuantonEnvironmentState& state, Subsystem keep) {
  if (!state.is_normalized())
    throw std::invalid_argument("partial_trace: state is not normalized");
  const std::size_t n = state.env_dim();

  // Environment density with the orthonormal paths traced out:
  // rho = sum_j |chi_j><chi_j|.
  ComplexMatrix rho(n, n);
  for (int path : {1, 2}) {
    const ComplexVector& chi = state.chi(path);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) rho(a, b) += chi[a] * std::conj(chi[b]);
  }

  switch (keep) {
    case Subsystem::Environment:
      return rho;
    case Subsystem::Detector: {
      if (n == 2) return rho;
      if (n == 4) {
        ComplexMatrix out(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t a = 0; a < 2; ++a) out(i, j) += rho(2 * i + a, 2 * j + a);
        return out;
      }
      throw std::invalid_argument("partial_trace: state has no detector factor");
    }
    case Subsystem::Ancilla: {
      if (n == 4) {
        ComplexMatrix out(2, 2);
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t i = 0; i < 2; ++i) out(a, b) += rho(2 * i + a, 2 * i + b);
        return out;
      }
      throw std::invalid_argument("partial_trace: state has no ancilla factor");
    }
  }
  throw std::logic_error("partial_trace: unknown subsystem");
}

namespace {

// Grows `basis` to a full orthonormal basis of C^n by picking, at each step,
// the canonical vector with the largest residual after projection.
void extend_orthonormal(std::vector<ComplexVector>& basis, std::size_t n) {
  while (basis.size() < n) {
    ComplexVector best(n);
    double best_norm = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      ComplexVector cand = ComplexVector::basis(n, j);
      for (int pass = 0; pass < 2; ++pass)
        for (const ComplexVector& b : basis) cand -= b * inner(b, cand);
      const double nrm = cand.norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = cand;
      }
    }
    basis.push_back(best.normalized());
  }
}

}  // namespace

ComplexMatrix complete_unitary(
    const std::vector<std::pair<ComplexVector, ComplexVector>>& prescribed) {
  if (prescribed.empty())
    throw std::invalid_argument("complete_unitary: need at least one prescribed pair");
  const std::size_t n = prescribed.front().first.dim();
  for (const auto& [in, out] : prescribed)
    if (in.dim() != n || out.dim() != n)
      throw std::invalid_argument("complete_unitary: all vectors must share one dimension");

  // A unitary extension exists iff the prescription preserves inner products.
  for (std::size_t i = 0; i < prescribed.size(); ++i)
    for (std::size_t j = i; j < prescribed.size(); ++j) {
      const Complex gin = inner(prescribed[i].first, prescribed[j].first);
      const Complex gout = inner(prescribed[i].second, prescribed[j].second);
      if (std::abs(gin - gout) > tol::kRank)
        throw std::invalid_argument("complete_unitary: prescribed map is not isometric");
    }

  std::vector<ComplexVector> residual_in, residual_out;
  double scale = 1.0;
  for (const auto& [in, out] : prescribed) {
    residual_in.push_back(in);
    residual_out.push_back(out);
    scale = std::max(scale, in.norm());
  }

  // Pivoted modified Gram-Schmidt on the inputs; every elimination step is
  // mirrored on the outputs so basis_out[k] stays the image of basis_in[k].
  std::vector<ComplexVector> basis_in, basis_out;
  std::vector<bool> used(prescribed.size(), false);
  for (;;) {
    std::size_t pivot = prescribed.size();
    double best = tol::kRank * scale;
    for (std::size_t i = 0; i < prescribed.size(); ++i) {
      if (used[i]) continue;
      const double nrm = residual_in[i].norm();
      if (nrm > best) {
        best = nrm;
        pivot = i;
      }
    }
    if (pivot == prescribed.size()) break;
    used[pivot] = true;

    ComplexVector u = residual_in[pivot] * Complex(1.0 / best, 0.0);
    ComplexVector v = residual_out[pivot] * Complex(1.0 / best, 0.0);
    for (std::size_t k = 0; k < basis_in.size(); ++k) {
      const Complex c = inner(basis_in[k], u);
      u -= basis_in[k] * c;
      v -= basis_out[k] * c;
    }
    const double un = u.norm();
    if (un <= tol::kRank) continue;
    u *= Complex(1.0 / un, 0.0);
    v *= Complex(1.0 / un, 0.0);

    // Force the image chain orthonormal to machine precision; the result then
    // satisfies U^dag U = I regardless of rounding in the prescription.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < basis_out.size(); ++k)
        v -= basis_out[k] * inner(basis_out[k], v);
    v = v.normalized();

    for (std::size_t i = 0; i < prescribed.size(); ++i) {
      if (used[i]) continue;
      const Complex c = inner(u, residual_in[i]);
      residual_in[i] -= u * c;
      residual_out[i] -= v * c;
    }
    basis_in.push_back(std::move(u));
    basis_out.push_back(std::move(v));
  }

  extend_orthonormal(basis_in, n);
  extend_orthonormal(basis_out, n);

  // U = sum_k |basis_out[k]><basis_in[k]|.
  ComplexMatrix result(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        result(a, b) += basis_out[k][a] * std::conj(basis_in[k][b]);
  return result;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
  const std::size_t n = m.rows();
  const std::size_t big = 2 * n;

  // Real symmetric embedding [[Re, -Im], [Im, Re]] of the symmetrized input;
  // each eigenvalue of the complex matrix shows up twice.
  std::vector<double> data(big * big, 0.0);
  auto S = [&](std::size_t i, std::size_t j) -> double& { return data[i * big + j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex h = 0.5 * (m(i, j) + std::conj(m(j, i)));
      S(i, j) = h.real();
      S(i + n, j + n) = h.real();
      S(i, j + n) = -h.imag();
      S(i + n, j) = h.imag();
    }

  double frob = 0.0;
  for (double v : data) frob += v * v;
  frob = std::sqrt(frob);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < big; ++p)
      for (std::size_t q = p + 1; q < big; ++q) off += S(p, q) * S(p, q);
    if (std::sqrt(off) <= 1e-14 * std::max(1.0, frob)) break;

    for (std::size_t p = 0; p < big; ++p)
      for (std::size_t q = p + 1; q < big; ++q) {
        const double apq = S(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (S(q, q) - S(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < big; ++k) {
          const double akp = S(k, p), akq = S(k, q);
          S(k, p) = c * akp - s * akq;
          S(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < big; ++k) {
          const double apk = S(p, k), aqk = S(q, k);
          S(p, k) = c * apk - s * aqk;
          S(q, k) = s * apk + c * aqk;
        }
      }
  }

  std::vector<double> diag(big);
  for (std::size_t i = 0; i < big; ++i) diag[i] = S(i, i);
  std::sort(diag.begin(), diag.end());
  std::vector<double> result(n);
  for (std::size_t k = 0; k < n; ++k) result[k] = 0.5 * (diag[2 * k] + diag[2 * k + 1]);
  return result;
}

bool is_density_matrix(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  if (m.hermiticity_error() > tolerance) return false;
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > tolerance) return false;
  const std::vector<double> eigs = hermitian_eigenvalues(m);
  return eigs.empty() || eigs.front() >= tol::kPsdFloor;
}

}  // namespace duality
