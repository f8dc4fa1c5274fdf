#pragma once

#include "phlearn/types.hpp"

namespace phlearn {

/// S from williamson() satisfies |S^T J S - J| within this tolerance.
inline constexpr double kSymplecticTol = 1e-9;
/// Relative reconstruction residual guaranteed by williamson().
inline constexpr double kReconstructTol = 1e-8;

/// Canonical symplectic matrix J_n = [[0, I_n], [-I_n, 0]].
Matrix canonical_J(int n);

/// True iff ||S^T J S - J||_F <= tol * ||J||_F. Throws DimensionError for odd dimension.
bool is_symplectic(const Matrix& S, double tol);

/// Williamson normal form Q = S^T blkdiag(D, D) S.
///
/// Algorithm: Q^{1/2} by symmetric eigendecomposition, then the skew-symmetric
/// K = Q^{1/2} J Q^{1/2} is brought to the canonical form U^T K U = [[0, D], [-I*D, 0]]
/// through the Hermitian eigenproblem of iK, and S = blkdiag(D,D)^{-1/2} U^T Q^{1/2}.
/// d is returned ascending. The U(1) phase freedom per eigenvalue plane is fixed
/// deterministically (largest-modulus eigenvector component made real positive),
/// but callers must not rely on any particular S beyond its defining identities.
WilliamsonFactors williamson(const SPDMatrix& Q);

/// Moduli of the conjugate eigenvalue pairs of JQ, ascending. Computed from the
/// nonsymmetric eigenproblem of JQ, independently of williamson().
Vector symplectic_eigenvalues(const SPDMatrix& Q);

/// Characteristic-polynomial coefficients of J blkdiag(D, D); see PolyCoeffs.
/// Throws DomainError on nonpositive entries.
PolyCoeffs poly_coeffs(const Vector& d);

/// e^{A t} via scaling-and-squaring with a Pade approximant.
Matrix expm(const Matrix& A, double t = 1.0);

}  // namespace phlearn
