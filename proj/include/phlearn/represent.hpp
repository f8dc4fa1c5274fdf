#pragma once

#include "phlearn/types.hpp"

namespace phlearn {

/// Default relative tolerance for the non-resonance / nondegeneracy checks.
inline constexpr double kCanonicalTol = 1e-8;

/// Diagonal of F_k: f_l = d_l * sum over k-subsets of {1..n}\{l} of (prod d_j)^2.
/// Throws DomainError when k is outside [0, n-1].
Vector f_diagonal(const Vector& d, int k);

/// Readout coefficients (c_1, c_3, ..., c_{2n-1}) with c_{2k+1} = v^T blkdiag(F_k, F_k) v.
Vector c_coeffs(const CHParams& p);

/// Controllable Hamiltonian representation: companion A with last row -a,
/// B = (0..0,1)^T, C = [0, c_{2n-1}, 0, c_{2n-3}, ..., 0, c_1].
Realization build_controllable(const CHParams& p);

/// Observable Hamiltonian representation: the transpose family,
/// A = A_ctr^T, B = C_ctr^T, C = (0..0,1).
Realization build_observable(const CHParams& p);

struct SystemParams {
  CHParams params;
  Matrix S;
};

/// (d, v) from the Williamson decomposition of sys.Q: d = symplectic
/// eigenvalues, v = S B. The pair is not unique across decompositions; compare
/// filters or invariants downstream, never raw v.
SystemParams params_from_system(const PHSystem& sys);

/// Morphism matrix L = S^{-1} [L_1 v | ... | L_{2n} v] intertwining the
/// controllable representation with the port-Hamiltonian system
/// (S^T blkdiag(D,D) S, S^{-1} v). Throws DomainError when S is not symplectic.
Matrix morphism_ctr(const CHParams& p, const Matrix& S);

/// Morphism matrix with rows B^T Q L_k, the L_k built from JQ, intertwining
/// sys with its observable representation. S must Williamson-decompose sys.Q;
/// throws DomainError when the reconstruction from S fails.
Matrix morphism_obs(const PHSystem& sys, const Matrix& S);

/// Non-resonance (pairwise-distinct d) and nondegeneracy (positive plane
/// radii) at relative tolerance tol.
bool is_canonical_params(const CHParams& p, double tol = kCanonicalTol);

/// det [v | Av | ... | A^{2n-1}v] with A = J blkdiag(D, D).
double controllability_det(const CHParams& p);

/// True iff the Krylov matrix [B | JQB | ... | (JQ)^{2n-1}B] has smallest
/// singular value above tol times its largest.
bool is_canonical_system(const PHSystem& sys, double tol = kCanonicalTol);

/// System isomorphism of the representations: equal d multisets and equal
/// readout coefficients, componentwise within tol.
bool sys_equivalent(const CHParams& p1, const CHParams& p2, double tol);

/// Zero-state filter invariants e_1..e_n of the recursion
/// e_k = c_{2k-1} - sum_j a_{2n-2j} e_{k-j}.
Vector filter_invariants(const CHParams& p);

/// Zero-state filter equality: the invariants e_1..e_n match within tol.
bool filter_equivalent_zero_state(const CHParams& p1, const CHParams& p2, double tol);

/// Verifies a supplied witness (P_sigma, A) for the star relation (conditions
/// (i)-(iv)); does not search for one. Throws DomainError when A is singular.
bool star_equivalent_witness(const CHParams& p1, const CHParams& p2, const std::vector<int>& sigma,
                             const Matrix& A, double tol);

/// Semi-direct S_n x| T^n action: d' = P_sigma d, v' = R P v.
CHParams apply_group_action(const GroupElement& g, const CHParams& p);

/// Unique-identifiability coordinates (d sorted ascending, plane radii pulled
/// along the sorting permutation). Requires is_canonical_params(p, tol).
CanonicalCoords canonical_coords(const CHParams& p, double tol = kCanonicalTol);

/// Orbit representative with all mass on the first coordinate of each plane:
/// d = d_up, v = (sqrt(R), 0).
CHParams params_from_coords(const CanonicalCoords& c);

/// Orthogonal permutation with O blkdiag(J_n, J_{m-n}) O^T = J_m, exactly.
EmbeddingMap build_O(int n, int m);

struct EmbeddedSystem {
  PHSystem system;
  EmbeddingMap map;
};

/// Lift to dimension 2m: Q' = O blkdiag(Q, I) O^T, B' = O (B; 0). The map
/// z -> O (I; 0) z is an injective system morphism.
EmbeddedSystem embed_system(const PHSystem& sys, int m);

/// Padding recipe d' = (d, 1..1), v' = (v_1..v_n, 0.., v_{n+1}..v_{2n}, 0..).
CHParams extend_params(const CHParams& p, int m);

}  // namespace phlearn
