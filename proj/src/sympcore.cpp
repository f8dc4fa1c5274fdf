#include "phlearn/sympcore.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>

#include "phlearn/detail/coeffs.hpp"

namespace phlearn {

SPDMatrix::SPDMatrix(const Matrix& q) {
  if (q.rows() != q.cols()) throw DimensionError("SPDMatrix: matrix must be square");
  if (q.rows() == 0 || q.rows() % 2 != 0) {
    throw DimensionError("SPDMatrix: dimension must be a positive even integer");
  }
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  const double asym = (q - q.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    throw DomainError("SPDMatrix: matrix is not symmetric");
  }
  q_ = 0.5 * (q + q.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(q_, Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues().minCoeff();
  const double lam_max = es.eigenvalues().cwiseAbs().maxCoeff();
  if (lam_min <= kSpdTol * lam_max) {
    throw DomainError("SPDMatrix: matrix is not positive-definite");
  }
}

PHSystem::PHSystem(int n_in, SPDMatrix q_in, Vector b_in)
    : n(n_in), Q(std::move(q_in)), B(std::move(b_in)) {
  if (n < 1 || Q.dim() != 2 * n || B.size() != 2 * n) {
    throw DimensionError("PHSystem: inconsistent dimensions");
  }
}

CHParams::CHParams(int n_in, Vector d_in, Vector v_in)
    : n(n_in), d(std::move(d_in)), v(std::move(v_in)) {
  if (n < 1 || d.size() != n || v.size() != 2 * n) {
    throw DimensionError("CHParams: inconsistent dimensions");
  }
  if ((d.array() <= 0.0).any()) throw DomainError("CHParams: entries of d must be positive");
}

CanonicalCoords::CanonicalCoords(Vector d_up_in, Vector r_in)
    : d_up(std::move(d_up_in)), R(std::move(r_in)) {
  if (d_up.size() != R.size() || d_up.size() == 0) {
    throw DimensionError("CanonicalCoords: inconsistent dimensions");
  }
  if (d_up(0) <= 0.0) throw DomainError("CanonicalCoords: d_up must be positive");
  for (Eigen::Index i = 0; i + 1 < d_up.size(); ++i) {
    if (d_up(i + 1) <= d_up(i)) throw DomainError("CanonicalCoords: d_up must be strictly increasing");
  }
  if ((R.array() <= 0.0).any()) throw DomainError("CanonicalCoords: R must be strictly positive");
}

GroupElement::GroupElement(std::vector<int> sigma_in, Vector theta_in)
    : sigma(std::move(sigma_in)), theta(std::move(theta_in)) {
  const int n = static_cast<int>(sigma.size());
  if (n < 1 || theta.size() != n) throw DimensionError("GroupElement: inconsistent dimensions");
  std::vector<bool> seen(sigma.size(), false);
  for (int s : sigma) {
    if (s < 0 || s >= n || seen[static_cast<std::size_t>(s)]) {
      throw DomainError("GroupElement: sigma is not a permutation");
    }
    seen[static_cast<std::size_t>(s)] = true;
  }
}

Matrix canonical_J(int n) {
  if (n < 1) throw DimensionError("canonical_J: n must be positive");
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

bool is_symplectic(const Matrix& S, double tol) {
  if (S.rows() != S.cols()) throw DimensionError("is_symplectic: matrix must be square");
  if (S.rows() % 2 != 0 || S.rows() == 0) {
    throw DimensionError("is_symplectic: dimension must be even");
  }
  const Matrix j = canonical_J(static_cast<int>(S.rows() / 2));
  return (S.transpose() * j * S - j).norm() <= tol * j.norm();
}

WilliamsonFactors williamson(const SPDMatrix& Q) {
  using Complex = std::complex<double>;
  const int two_n = static_cast<int>(Q.dim());
  const int n = two_n / 2;

  Eigen::SelfAdjointEigenSolver<Matrix> es(Q.matrix());
  const Matrix sqrt_q =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();

  const Matrix j = canonical_J(n);
  Matrix k = sqrt_q * j * sqrt_q;
  k = 0.5 * (k - k.transpose().eval());

  // iK is Hermitian with eigenvalues (-d_n..-d_1, d_1..d_n); the positive half
  // carries the symplectic eigenvalues, ascending.
  Eigen::MatrixXcd h = Complex(0.0, 1.0) * k.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esh(h);

  Vector d(n);
  Matrix u(two_n, two_n);
  for (int p = 0; p < n; ++p) {
    const double lambda = esh.eigenvalues()(n + p);
    Eigen::VectorXcd z = esh.eigenvectors().col(n + p);

    // Fix the U(1) phase: make the largest-modulus component real positive,
    // preferring the largest index among near-ties so that Q = I maps to S = I.
    const double zmax = z.cwiseAbs().maxCoeff();
    int pivot = 0;
    for (int i = 0; i < two_n; ++i) {
      if (std::abs(z(i)) >= zmax * (1.0 - 1e-9)) pivot = i;
    }
    z *= std::conj(z(pivot)) / std::abs(z(pivot));

    const Vector x = z.real();
    const Vector y = z.imag();
    d(p) = lambda;
    u.col(p) = std::sqrt(2.0) * y;
    u.col(n + p) = std::sqrt(2.0) * x;
  }

  Vector dd(two_n);
  dd << d, d;
  const Matrix s = dd.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose() * sqrt_q;
  return {s, d};
}

Vector symplectic_eigenvalues(const SPDMatrix& Q) {
  const int n = static_cast<int>(Q.half_dim());
  const Matrix a = canonical_J(n) * Q.matrix();
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  std::vector<double> moduli(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < 2 * n; ++i) moduli[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
  std::sort(moduli.begin(), moduli.end());
  Vector d(n);
  for (int p = 0; p < n; ++p) {
    d(p) = 0.5 * (moduli[static_cast<std::size_t>(2 * p)] + moduli[static_cast<std::size_t>(2 * p + 1)]);
  }
  return d;
}

PolyCoeffs poly_coeffs(const Vector& d) {
  if (d.size() == 0) throw DimensionError("poly_coeffs: d must be nonempty");
  if ((d.array() <= 0.0).any()) throw DomainError("poly_coeffs: entries of d must be positive");
  const std::vector<double> dv(d.data(), d.data() + d.size());
  const std::vector<double> a = detail::char_poly_coeffs(dv);
  PolyCoeffs out{static_cast<int>(d.size()), Vector::Zero(2 * d.size())};
  for (Eigen::Index i = 0; i < out.a.size(); ++i) out.a(i) = a[static_cast<std::size_t>(i)];
  return out;
}

Matrix expm(const Matrix& A, double t) {
  if (A.rows() != A.cols()) throw DimensionError("expm: matrix must be square");
  return (A * t).exp();
}

}  // namespace phlearn
