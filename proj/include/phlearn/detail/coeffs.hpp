#pragma once

#include <cstddef>
#include <vector>

namespace phlearn::detail {

// Shared scalar-generic kernels for the characteristic-polynomial and
// readout coefficients of the Hamiltonian representations. Instantiated with
// double for the public API and with Dual for sensitivity propagation.

/// Coefficients of prod_i (mu + s_i) as q[k] = coeff of mu^k, k = 0..n.
template <typename Scalar>
std::vector<Scalar> monic_from_roots(const std::vector<Scalar>& s) {
  std::vector<Scalar> q(s.size() + 1, Scalar(0.0));
  q[0] = Scalar(1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t k = i + 1; k > 0; --k) {
      q[k] = q[k] * s[i] + (k >= 1 ? q[k - 1] : Scalar(0.0));
    }
    q[0] = q[0] * s[i];
  }
  return q;
}

/// a_0..a_{2n-1} with lambda^{2n} + sum a_i lambda^i = prod (lambda^2 + d_i^2).
/// Odd entries are exactly zero by construction.
template <typename Scalar>
std::vector<Scalar> char_poly_coeffs(const std::vector<Scalar>& d) {
  const std::size_t n = d.size();
  std::vector<Scalar> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = d[i] * d[i];
  const std::vector<Scalar> q = monic_from_roots(s);
  std::vector<Scalar> a(2 * n, Scalar(0.0));
  for (std::size_t k = 0; k < n; ++k) a[2 * k] = q[k];
  return a;
}

/// Diagonal of F_k: f_l = d_l * e_k({d_j^2 : j != l}).
template <typename Scalar>
std::vector<Scalar> f_diagonal_impl(const std::vector<Scalar>& d, int k) {
  const std::size_t n = d.size();
  std::vector<Scalar> f(n);
  for (std::size_t l = 0; l < n; ++l) {
    // Elementary symmetric polynomial e_k of the squared entries without d_l.
    std::vector<Scalar> e(static_cast<std::size_t>(k) + 1, Scalar(0.0));
    e[0] = Scalar(1.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == l) continue;
      const Scalar s = d[j] * d[j];
      for (std::size_t t = e.size() - 1; t > 0; --t) e[t] = e[t] + e[t - 1] * s;
    }
    f[l] = d[l] * e[static_cast<std::size_t>(k)];
  }
  return f;
}

/// c_{2k+1} = sum_l f_l^{(k)} (v_l^2 + v_{n+l}^2), returned as (c_1, c_3, ..., c_{2n-1}).
template <typename Scalar>
std::vector<Scalar> c_coeffs_impl(const std::vector<Scalar>& d, const std::vector<Scalar>& v) {
  const std::size_t n = d.size();
  std::vector<Scalar> radii(n);
  for (std::size_t l = 0; l < n; ++l) radii[l] = v[l] * v[l] + v[n + l] * v[n + l];
  std::vector<Scalar> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<Scalar> f = f_diagonal_impl(d, static_cast<int>(k));
    Scalar acc(0.0);
    for (std::size_t l = 0; l < n; ++l) acc += f[l] * radii[l];
    c[k] = acc;
  }
  return c;
}

}  // namespace phlearn::detail
