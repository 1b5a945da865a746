#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace duality {

using Complex = std::complex<double>;

/// Shared numeric tolerances.
namespace tol {
inline constexpr double kNorm = 1e-12;       // normalization / unitarity / identities
inline constexpr double kRank = 1e-10;       // rank decisions in orthonormal extension
inline constexpr double kPsdFloor = -1e-10;  // smallest admissible density eigenvalue
}  // namespace tol

/// Dense complex vector. Every Hilbert space in this library has dim <= 16,
/// so storage is a plain contiguous array and all operations are exact loops.
class ComplexVector {
 public:
  explicit ComplexVector(std::size_t dim);
  ComplexVector(std::initializer_list<Complex> amplitudes);
  explicit ComplexVector(std::vector<Complex> amplitudes);

  /// Canonical basis vector e_index in dimension dim.
  static ComplexVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return amps_.size(); }
  Complex& operator[](std::size_t i) { return amps_[i]; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm_sq() const;
  double norm() const;
  bool is_normalized(double tolerance = tol::kNorm) const;
  /// Returns the unit-norm rescaling; throws std::domain_error on a zero vector.
  ComplexVector normalized() const;

  ComplexVector& operator+=(const ComplexVector& rhs);
  ComplexVector& operator-=(const ComplexVector& rhs);
  ComplexVector& operator*=(Complex factor);

 private:
  std::vector<Complex> amps_;
};

ComplexVector operator+(ComplexVector lhs, const ComplexVector& rhs);
ComplexVector operator-(ComplexVector lhs, const ComplexVector& rhs);
ComplexVector operator*(ComplexVector v, Complex factor);
ComplexVector operator*(Complex factor, ComplexVector v);

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  ComplexMatrix adjoint() const;
  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexVector apply(const ComplexVector& v) const;

  Complex trace() const;
  double max_abs() const;
  /// max-entry norm of U^dag U - I; zero for an exactly unitary matrix.
  double unitarity_error() const;
  /// max-entry norm of M - M^dag.
  double hermiticity_error() const;

 private:
  std::size_t rows_, cols_;
  std::vector<Complex> entries_;
};

/// Joint state of a quanton behind a double slit and its environment,
///
///   |state> = sum_j |path_j> (x) |chi_j>,   j in {1, 2},
///
/// where the two path amplitudes are treated as exactly orthonormal and the
/// environment vectors chi_1, chi_2 absorb the slit weights, so a normalized
/// state has <chi_1|chi_1> + <chi_2|chi_2> = 1. The environment is one of:
/// dim 1 (bare quanton), dim 2 (path detector), dim 4 (detector (x) ancilla,
/// index = detector_index * 2 + ancilla_index).
class QuantonEnvironmentState {
 public:
  /// Stores the amplitudes exactly as given (may be deliberately unnormalized).
  QuantonEnvironmentState(ComplexVector chi1, ComplexVector chi2);

  /// Rescales the total norm to exactly 1 and records the correction applied.
  static QuantonEnvironmentState make_normalized(ComplexVector chi1, ComplexVector chi2);

  std::size_t env_dim() const { return chi1_.dim(); }
  /// Environment amplitude vector for path 1 or 2.
  const ComplexVector& chi(int path) const;

  double total_norm_sq() const;
  bool is_normalized(double tolerance = tol::kNorm) const;
  /// |1 - amplitude scale| applied by make_normalized (0 for exact inputs).
  double norm_correction() const { return norm_correction_; }

 private:
  ComplexVector chi1_, chi2_;
  double norm_correction_ = 0.0;
};

enum class Subsystem { Environment, Detector, Ancilla };

/// <u|v> = sum_k conj(u_k) v_k. Throws on dimension mismatch.
Complex inner(const ComplexVector& u, const ComplexVector& v);

/// Kronecker product; result[(i * v.dim) + k] = u_i v_k.
ComplexVector tensor(const ComplexVector& u, const ComplexVector& v);

/// Reduced density matrix of the selected environment factor, with the path
/// degree of freedom always traced out (the paths are orthonormal by
/// construction). Requires a normalized state.
ComplexMatrix partial_trace(const QuantonEnvironmentState& state, Subsystem keep);

/// Extends a partial isometry, given as (input, output) vector pairs, to a
/// full unitary matrix. The prescribed inputs may be linearly dependent (the
/// redundant ones are dropped at the rank tolerance); the map must preserve
/// all pairwise inner products or the call throws "not isometric". Free
/// columns map an orthonormal extension of the input span onto an orthonormal
/// extension of the output span.
ComplexMatrix complete_unitary(
    const std::vector<std::pair<ComplexVector, ComplexVector>>& prescribed);

/// Eigenvalues of a (near-)Hermitian matrix, ascending. The matrix is
/// symmetrized first; computed by cyclic Jacobi on the real embedding.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// Hermitian within tolerance, trace 1 within tolerance, eigenvalues above
/// the PSD floor.
bool is_density_matrix(const ComplexMatrix& m, double tolerance = tol::kNorm);

}  // namespace duality
