#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace phlearn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Inconsistent or unsupported dimensions (odd symplectic dimension, size mismatch).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input violates a mathematical precondition (not SPD, not symplectic, out-of-range index).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Malformed file content.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Relative symmetry tolerance accepted when constructing an SPDMatrix.
inline constexpr double kSymmetryTol = 1e-12;
/// A matrix counts as positive-definite when lambda_min > kSpdTol * ||Q||_2.
inline constexpr double kSpdTol = 1e-12;

/// Symmetric positive-definite matrix of even dimension 2n.
///
/// The constructor checks symmetry against kSymmetryTol, stores the
/// symmetrized matrix, and verifies positive definiteness against kSpdTol.
class SPDMatrix {
 public:
  explicit SPDMatrix(const Matrix& q);

  const Matrix& matrix() const { return q_; }
  Eigen::Index dim() const { return q_.rows(); }
  Eigen::Index half_dim() const { return q_.rows() / 2; }

 private:
  Matrix q_;
};

/// Normal-form port-Hamiltonian system zdot = J Q z + B u, y = B^T Q z.
struct PHSystem {
  int n;
  SPDMatrix Q;
  Vector B;

  PHSystem(int n_in, SPDMatrix q_in, Vector b_in);
};

/// Reduced parameter pair (d, v) shared by the controllable and observable
/// Hamiltonian representations; d_i > 0.
struct CHParams {
  int n;
  Vector d;
  Vector v;

  CHParams(int n_in, Vector d_in, Vector v_in);
};

/// Generic linear SISO state-space triple (A, B, C), y = C x.
struct Realization {
  Matrix A;
  Vector B;
  RowVector C;

  Eigen::Index dim() const { return A.rows(); }
};

/// Williamson factors of an SPD matrix: Q = S^T blkdiag(D, D) S with S
/// symplectic and d the symplectic eigenvalues, ascending.
struct WilliamsonFactors {
  Matrix S;
  Vector d;
};

/// Coefficients a_0..a_{2n-1} of lambda^{2n} + sum a_i lambda^i = prod(lambda^2 + d_i^2);
/// a_{2n} = 1 by convention and odd entries are exactly zero.
struct PolyCoeffs {
  int n;
  Vector a;
};

/// Unique-identifiability coordinates: sorted symplectic eigenvalues and
/// rotation-plane radii. d_up strictly increasing, R_i > 0.
struct CanonicalCoords {
  Vector d_up;
  Vector R;

  CanonicalCoords(Vector d_up_in, Vector r_in);
};

/// Element (sigma, theta) of the semi-direct product S_n x| T^n acting on
/// CHParams. sigma is a 0-based permutation of {0..n-1}.
struct GroupElement {
  std::vector<int> sigma;
  Vector theta;

  GroupElement(std::vector<int> sigma_in, Vector theta_in);
};

/// Orthogonal permutation O with O blkdiag(J_n, J_{m-n}) O^T = J_m, used to
/// lift 2n-dimensional systems into dimension 2m.
struct EmbeddingMap {
  int n;
  int m;
  Matrix O;
};

}  // namespace phlearn
