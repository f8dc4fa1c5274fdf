#include "phlearn/represent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "phlearn/detail/coeffs.hpp"
#include "phlearn/sympcore.hpp"

namespace phlearn {

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector to_eigen(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = v[static_cast<std::size_t>(i)];
  return out;
}

/// A = J blkdiag(D, D) = [[0, D], [-D, 0]].
Matrix hamiltonian_matrix(const Vector& d) {
  const Eigen::Index n = d.size();
  Matrix a = Matrix::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n) = d.asDiagonal();
  a.bottomLeftCorner(n, n) = -Matrix(d.asDiagonal());
  return a;
}

bool close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

Matrix permutation_matrix(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  Matrix p = Matrix::Zero(n, n);
  // (P_sigma x)_i = x_{sigma(i)}.
  for (int i = 0; i < n; ++i) p(i, sigma[static_cast<std::size_t>(i)]) = 1.0;
  return p;
}

std::vector<int> sorting_permutation(const Vector& d) {
  std::vector<int> idx(static_cast<std::size_t>(d.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return d(a) < d(b); });
  return idx;
}

}  // namespace

Vector f_diagonal(const Vector& d, int k) {
  if (k < 0 || k >= d.size()) throw DomainError("f_diagonal: k must lie in [0, n-1]");
  if ((d.array() <= 0.0).any()) throw DomainError("f_diagonal: entries of d must be positive");
  return to_eigen(detail::f_diagonal_impl(to_std(d), k));
}

Vector c_coeffs(const CHParams& p) {
  return to_eigen(detail::c_coeffs_impl(to_std(p.d), to_std(p.v)));
}

Realization build_controllable(const CHParams& p) {
  const int n = p.n;
  const Vector a = poly_coeffs(p.d).a;
  const Vector cc = c_coeffs(p);

  Realization r;
  r.A = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i + 1 < 2 * n; ++i) r.A(i, i + 1) = 1.0;
  r.A.row(2 * n - 1) = -a.transpose();
  r.B = Vector::Zero(2 * n);
  r.B(2 * n - 1) = 1.0;
  r.C = RowVector::Zero(2 * n);
  for (int j = 0; j < n; ++j) r.C(2 * j + 1) = cc(n - 1 - j);  // [0, c_{2n-1}, ..., 0, c_1]
  return r;
}

Realization build_observable(const CHParams& p) {
  const Realization ctr = build_controllable(p);
  Realization obs;
  obs.A = ctr.A.transpose();
  obs.B = ctr.C.transpose();
  obs.C = RowVector::Zero(2 * p.n);
  obs.C(2 * p.n - 1) = 1.0;
  return obs;
}

SystemParams params_from_system(const PHSystem& sys) {
  const WilliamsonFactors w = williamson(sys.Q);
  return {CHParams(sys.n, w.d, w.S * sys.B), w.S};
}

Matrix morphism_ctr(const CHParams& p, const Matrix& S) {
  if (S.rows() != 2 * p.n || S.cols() != 2 * p.n) {
    throw DimensionError("morphism_ctr: S has wrong dimensions");
  }
  if (!is_symplectic(S, kSymplecticTol)) throw DomainError("morphism_ctr: S is not symplectic");

  const int two_n = 2 * p.n;
  const Matrix a = hamiltonian_matrix(p.d);
  const Vector coeff = poly_coeffs(p.d).a;

  // L_{2n} = I and L_j = A L_{j+1} + a_j I, so the columns L_j v follow the
  // backward recursion col_j = A col_{j+1} + a_j v.
  Matrix lp(two_n, two_n);
  lp.col(two_n - 1) = p.v;
  for (int j = two_n - 1; j >= 1; --j) {
    lp.col(j - 1) = a * lp.col(j) + coeff(j) * p.v;
  }
  return S.partialPivLu().solve(lp);
}

Matrix morphism_obs(const PHSystem& sys, const Matrix& S) {
  const int n = sys.n;
  const int two_n = 2 * n;
  if (S.rows() != two_n || S.cols() != two_n) {
    throw DimensionError("morphism_obs: S has wrong dimensions");
  }
  if (!is_symplectic(S, kSymplecticTol)) throw DomainError("morphism_obs: S is not symplectic");

  const Matrix& q = sys.Q.matrix();
  // Recover blkdiag(D, D) = S^{-T} Q S^{-1} and verify the reconstruction.
  const Matrix s_inv = S.partialPivLu().inverse();
  const Matrix w = s_inv.transpose() * q * s_inv;
  Vector d(n);
  for (int i = 0; i < n; ++i) d(i) = 0.5 * (w(i, i) + w(n + i, n + i));
  Matrix dd = Matrix::Zero(two_n, two_n);
  dd.diagonal().head(n) = d;
  dd.diagonal().tail(n) = d;
  if ((d.array() <= 0.0).any() ||
      (S.transpose() * dd * S - q).norm() > kReconstructTol * q.norm()) {
    throw DomainError("morphism_obs: S does not Williamson-decompose sys.Q");
  }

  const Matrix m = canonical_J(n) * q;
  const Vector coeff = poly_coeffs(d).a;
  const RowVector bq = (sys.B.transpose() * q).eval();

  // Rows r_j = B^T Q L_j with L_{2n} = I and L_j = M L_{j+1} + a_j I.
  Matrix l(two_n, two_n);
  l.row(two_n - 1) = bq;
  for (int j = two_n - 1; j >= 1; --j) {
    l.row(j - 1) = l.row(j) * m + coeff(j) * bq;
  }
  return l;
}

bool is_canonical_params(const CHParams& p, double tol) {
  const int n = p.n;
  const double dmax = p.d.maxCoeff();
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      if (std::abs(p.d(j) - p.d(k)) <= tol * dmax) return false;
    }
  }
  const double vnorm2 = p.v.squaredNorm();
  for (int l = 0; l < n; ++l) {
    const double radius = p.v(l) * p.v(l) + p.v(n + l) * p.v(n + l);
    if (radius <= tol * tol * vnorm2) return false;
  }
  return true;
}

double controllability_det(const CHParams& p) {
  const int two_n = 2 * p.n;
  const Matrix a = hamiltonian_matrix(p.d);
  Matrix krylov(two_n, two_n);
  krylov.col(0) = p.v;
  for (int k = 1; k < two_n; ++k) krylov.col(k) = a * krylov.col(k - 1);
  return krylov.determinant();
}

bool is_canonical_system(const PHSystem& sys, double tol) {
  const int two_n = 2 * sys.n;
  const Matrix a = canonical_J(sys.n) * sys.Q.matrix();
  Matrix krylov(two_n, two_n);
  krylov.col(0) = sys.B;
  for (int k = 1; k < two_n; ++k) krylov.col(k) = a * krylov.col(k - 1);
  Eigen::JacobiSVD<Matrix> svd(krylov);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > tol * sv(0);
}

bool sys_equivalent(const CHParams& p1, const CHParams& p2, double tol) {
  if (p1.n != p2.n) throw DimensionError("sys_equivalent: dimension mismatch");
  Vector d1 = p1.d;
  Vector d2 = p2.d;
  std::sort(d1.data(), d1.data() + d1.size());
  std::sort(d2.data(), d2.data() + d2.size());
  for (int i = 0; i < p1.n; ++i) {
    if (!close(d1(i), d2(i), tol)) return false;
  }
  const Vector c1 = c_coeffs(p1);
  const Vector c2 = c_coeffs(p2);
  for (int i = 0; i < p1.n; ++i) {
    if (!close(c1(i), c2(i), tol)) return false;
  }
  return true;
}

Vector filter_invariants(const CHParams& p) {
  const int n = p.n;
  const Vector a = poly_coeffs(p.d).a;
  const Vector c = c_coeffs(p);
  Vector e(n);
  for (int k = 1; k <= n; ++k) {
    double acc = c(k - 1);  // c_{2k-1}
    for (int j = 1; j < k; ++j) acc -= a(2 * n - 2 * j) * e(k - j - 1);
    e(k - 1) = acc;
  }
  return e;
}

bool filter_equivalent_zero_state(const CHParams& p1, const CHParams& p2, double tol) {
  if (p1.n != p2.n) throw DimensionError("filter_equivalent_zero_state: dimension mismatch");
  const Vector e1 = filter_invariants(p1);
  const Vector e2 = filter_invariants(p2);
  for (int i = 0; i < p1.n; ++i) {
    if (!close(e1(i), e2(i), tol)) return false;
  }
  return true;
}

bool star_equivalent_witness(const CHParams& p1, const CHParams& p2, const std::vector<int>& sigma,
                             const Matrix& A, double tol) {
  if (p1.n != p2.n || static_cast<int>(sigma.size()) != p1.n) {
    throw DimensionError("star_equivalent_witness: dimension mismatch");
  }
  const int n = p1.n;
  if (A.rows() != 2 * n || A.cols() != 2 * n) {
    throw DimensionError("star_equivalent_witness: A has wrong dimensions");
  }
  const GroupElement check_perm(sigma, Vector::Zero(n));  // validates sigma
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) throw DomainError("star_equivalent_witness: A is singular");

  const Matrix p_sigma = permutation_matrix(sigma);
  Matrix p = Matrix::Zero(2 * n, 2 * n);
  p.topLeftCorner(n, n) = p_sigma;
  p.bottomRightCorner(n, n) = p_sigma;

  Matrix blk1 = Matrix::Zero(2 * n, 2 * n);
  blk1.diagonal().head(n) = p1.d;
  blk1.diagonal().tail(n) = p1.d;
  Matrix blk2 = Matrix::Zero(2 * n, 2 * n);
  blk2.diagonal().head(n) = p2.d;
  blk2.diagonal().tail(n) = p2.d;

  const Matrix j = canonical_J(n);
  const double scale_d = std::max(1.0, blk1.norm());

  const bool cond1 = (p * blk1 * p.transpose() - blk2).norm() <= tol * scale_d;
  const Vector lhs2 = A.transpose() * blk1 * A * p1.v;
  const Vector rhs2 = blk1 * p1.v;
  const bool cond2 = (lhs2 - rhs2).norm() <= tol * std::max(1.0, rhs2.norm());
  const Matrix lhs3 = A * j * blk1;
  const Matrix rhs3 = j * blk1 * A;
  const bool cond3 = (lhs3 - rhs3).norm() <= tol * std::max(1.0, rhs3.norm());
  const Vector pav = p * A * p1.v;
  const bool cond4 = (p2.v - pav).norm() <= tol * std::max({1.0, p2.v.norm(), pav.norm()});
  return cond1 && cond2 && cond3 && cond4;
}

CHParams apply_group_action(const GroupElement& g, const CHParams& p) {
  const int n = p.n;
  if (static_cast<int>(g.sigma.size()) != n) {
    throw DimensionError("apply_group_action: dimension mismatch");
  }
  Vector d(n);
  Vector pv(2 * n);
  for (int i = 0; i < n; ++i) {
    const int s = g.sigma[static_cast<std::size_t>(i)];
    d(i) = p.d(s);
    pv(i) = p.v(s);
    pv(n + i) = p.v(n + s);
  }
  Vector v(2 * n);
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(g.theta(i));
    const double s = std::sin(g.theta(i));
    v(i) = c * pv(i) - s * pv(n + i);
    v(n + i) = s * pv(i) + c * pv(n + i);
  }
  return CHParams(n, d, v);
}

CanonicalCoords canonical_coords(const CHParams& p, double tol) {
  if (!is_canonical_params(p, tol)) {
    throw DomainError("canonical_coords: parameters are not canonical");
  }
  const int n = p.n;
  const std::vector<int> sigma = sorting_permutation(p.d);
  Vector d_up(n);
  Vector r(n);
  for (int i = 0; i < n; ++i) {
    const int s = sigma[static_cast<std::size_t>(i)];
    d_up(i) = p.d(s);
    r(i) = p.v(s) * p.v(s) + p.v(n + s) * p.v(n + s);
  }
  return CanonicalCoords(d_up, r);
}

CHParams params_from_coords(const CanonicalCoords& c) {
  const int n = static_cast<int>(c.d_up.size());
  Vector v = Vector::Zero(2 * n);
  v.head(n) = c.R.cwiseSqrt();
  return CHParams(n, c.d_up, v);
}

EmbeddingMap build_O(int n, int m) {
  if (n < 1 || m < n) throw DomainError("build_O: require m >= n >= 1");
  Matrix o = Matrix::Zero(2 * m, 2 * m);
  // Source order (q_1..q_n, p_1..p_n, q_{n+1}..q_m, p_{n+1}..p_m) to target
  // order (q_1..q_m, p_1..p_m).
  for (int i = 0; i < 2 * m; ++i) {
    int target;
    if (i < n) {
      target = i;
    } else if (i < 2 * n) {
      target = m + (i - n);
    } else if (i < n + m) {
      target = n + (i - 2 * n);
    } else {
      target = m + n + (i - n - m);
    }
    o(target, i) = 1.0;
  }
  return {n, m, o};
}

EmbeddedSystem embed_system(const PHSystem& sys, int m) {
  const int n = sys.n;
  EmbeddingMap map = build_O(n, m);
  Matrix big = Matrix::Identity(2 * m, 2 * m);
  big.topLeftCorner(2 * n, 2 * n) = sys.Q.matrix();
  const Matrix q_prime = map.O * big * map.O.transpose();
  Vector b_prime_src = Vector::Zero(2 * m);
  b_prime_src.head(2 * n) = sys.B;
  const Vector b_prime = map.O * b_prime_src;
  return {PHSystem(m, SPDMatrix(q_prime), b_prime), std::move(map)};
}

CHParams extend_params(const CHParams& p, int m) {
  const int n = p.n;
  if (m < n) throw DomainError("extend_params: require m >= n");
  Vector d = Vector::Ones(m);
  d.head(n) = p.d;
  Vector v = Vector::Zero(2 * m);
  v.head(n) = p.v.head(n);
  v.segment(m, n) = p.v.tail(n);
  return CHParams(m, d, v);
}

}  // namespace phlearn
