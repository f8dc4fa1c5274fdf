#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phlearn/bench.hpp"
#include "phlearn/represent.hpp"
#include "phlearn/sympcore.hpp"
#include "test_helpers.hpp"

using namespace phlearn;
using phtest::compose;
using phtest::controllability_product_formula;
using phtest::f_entry_oracle;
using phtest::random_canonical_params;
using phtest::random_group_element;
using phtest::random_spd;

namespace {

Matrix blkdiag_dd(const Vector& d) {
  const Eigen::Index n = d.size();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.diagonal().head(n) = d;
  m.diagonal().tail(n) = d;
  return m;
}

CHParams make_params(std::initializer_list<double> d, std::initializer_list<double> v) {
  Vector dv(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) dv(i++) = x;
  Vector vv(static_cast<Eigen::Index>(v.size()));
  i = 0;
  for (double x : v) vv(i++) = x;
  return CHParams(static_cast<int>(d.size()), dv, vv);
}

}  // namespace

TEST_CASE("f_diagonal examples") {
  Vector d2(2);
  d2 << 1, 2;
  const Vector f0 = f_diagonal(d2, 0);
  CHECK(f0(0) == doctest::Approx(1.0));
  CHECK(f0(1) == doctest::Approx(2.0));
  const Vector f1 = f_diagonal(d2, 1);
  CHECK(f1(0) == doctest::Approx(4.0));
  CHECK(f1(1) == doctest::Approx(2.0));

  Vector d3(3);
  d3 << 1, 2, 3;
  const Vector f2 = f_diagonal(d3, 2);
  CHECK(f2(0) == doctest::Approx(36.0));
  CHECK(f2(1) == doctest::Approx(18.0));
  CHECK(f2(2) == doctest::Approx(12.0));

  CHECK_THROWS_AS(f_diagonal(d2, 2), DomainError);
  CHECK_THROWS_AS(f_diagonal(d2, -1), DomainError);
}

TEST_CASE("f_diagonal against subset-enumeration oracle") {
  std::mt19937_64 gen(19);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 5);
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = phtest::uniform(gen, 0.2, 3.0);
    for (int k = 0; k < n; ++k) {
      const Vector f = f_diagonal(d, k);
      for (int l = 0; l < n; ++l) {
        CHECK(f(l) == doctest::Approx(f_entry_oracle(d, k, l)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("c_coeffs examples") {
  CHECK(c_coeffs(make_params({1}, {1, 0}))(0) == doctest::Approx(1.0));
  CHECK(c_coeffs(make_params({3}, {0, 2}))(0) == doctest::Approx(12.0));
  const Vector c = c_coeffs(make_params({1, 2}, {1, 1, 1, 1}));
  CHECK(c(0) == doctest::Approx(6.0));   // c_1
  CHECK(c(1) == doctest::Approx(12.0));  // c_3
}

TEST_CASE("build_controllable examples") {
  const Realization r1 = build_controllable(make_params({1}, {1, 0}));
  Matrix a_expected(2, 2);
  a_expected << 0, 1, -1, 0;
  CHECK((r1.A - a_expected).norm() == 0.0);
  CHECK(r1.B(0) == 0.0);
  CHECK(r1.B(1) == 1.0);
  CHECK(r1.C(0) == 0.0);
  CHECK(r1.C(1) == doctest::Approx(1.0));

  const Realization r2 = build_controllable(make_params({1, 2}, {1, 1, 1, 1}));
  CHECK(r2.A(3, 0) == doctest::Approx(-4.0));
  CHECK(r2.A(3, 1) == 0.0);
  CHECK(r2.A(3, 2) == doctest::Approx(-5.0));
  CHECK(r2.A(3, 3) == 0.0);
  CHECK(r2.C(0) == 0.0);
  CHECK(r2.C(1) == doctest::Approx(12.0));
  CHECK(r2.C(2) == 0.0);
  CHECK(r2.C(3) == doctest::Approx(6.0));
}

TEST_CASE("controllable form has full-rank controllability matrix") {
  std::mt19937_64 gen(29);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 3);
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = phtest::uniform(gen, 0.2, 2.0);
    const CHParams p(n, d, phtest::random_vector(gen, 2 * n, -1.0, 1.0));
    const Realization r = build_controllable(p);
    Matrix krylov(2 * n, 2 * n);
    krylov.col(0) = r.B;
    for (int k = 1; k < 2 * n; ++k) krylov.col(k) = r.A * krylov.col(k - 1);
    Eigen::FullPivLU<Matrix> lu(krylov);
    CHECK(lu.rank() == 2 * n);
  }
}

TEST_CASE("build_observable is the transpose family") {
  const Realization o1 = build_observable(make_params({1}, {1, 0}));
  Matrix a_expected(2, 2);
  a_expected << 0, -1, 1, 0;
  CHECK((o1.A - a_expected).norm() == 0.0);
  CHECK(o1.B(0) == 0.0);
  CHECK(o1.B(1) == doctest::Approx(1.0));
  CHECK(o1.C(0) == 0.0);
  CHECK(o1.C(1) == 1.0);

  std::mt19937_64 gen(31);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const CHParams p = random_canonical_params(gen, n);
    const Realization ctr = build_controllable(p);
    const Realization obs = build_observable(p);
    CHECK((obs.A - ctr.A.transpose()).norm() == 0.0);
    CHECK((obs.B - ctr.C.transpose()).norm() == 0.0);
    CHECK((obs.C.transpose() - ctr.B).norm() == 0.0);
  }
}

TEST_CASE("params_from_system") {
  {
    const PHSystem sys(1, SPDMatrix(Matrix::Identity(2, 2)), Vector::Ones(2).eval());
    const SystemParams sp = params_from_system(sys);
    CHECK(sp.params.d(0) == doctest::Approx(1.0));
    // v is determined only up to the U(1) freedom; its plane radius is not.
    CHECK(sp.params.v.squaredNorm() == doctest::Approx(sys.B.squaredNorm()).epsilon(1e-10));
  }
  {
    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = 4.0;
    q(1, 1) = 1.0;
    Vector b(2);
    b << 1, 0;
    const PHSystem sys(1, SPDMatrix(q), b);
    const SystemParams sp = params_from_system(sys);
    CHECK(sp.params.d(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK((sp.S.transpose() * blkdiag_dd(sp.params.d) * sp.S - q).norm() < 1e-10);
    CHECK((sp.S * b - sp.params.v).norm() == 0.0);
  }
  {
    const SystemParams sp = params_from_system(circuit_system());
    REQUIRE(sp.params.d.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(sp.params.d(i) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("morphism_ctr identities") {
  std::mt19937_64 gen(37);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const CHParams p = random_canonical_params(gen, n);
    const Matrix s = phtest::random_symplectic(gen, n);
    const Matrix l = morphism_ctr(p, s);

    const Matrix q = s.transpose() * blkdiag_dd(p.d) * s;
    const Vector b = s.partialPivLu().solve(p.v);
    const Realization ctr = build_controllable(p);
    const Matrix jq = canonical_J(n) * q;

    CHECK((l * ctr.A - jq * l).norm() <= 1e-8 * std::max(1.0, (jq * l).norm()));
    CHECK((l * ctr.B - b).norm() <= 1e-8 * std::max(1.0, b.norm()));
    const RowVector lhs = (b.transpose() * q * l).eval();
    CHECK((ctr.C - lhs).norm() <= 1e-8 * std::max(1.0, lhs.norm()));
    // Canonical parameters give an invertible morphism.
    Eigen::FullPivLU<Matrix> lu(l);
    CHECK(lu.isInvertible());
  }
}

TEST_CASE("morphism_ctr n=1 hand example") {
  const CHParams p = make_params({1}, {1, 0});
  const Matrix l = morphism_ctr(p, Matrix::Identity(2, 2));
  Matrix expected(2, 2);
  expected << 0, 1, -1, 0;
  CHECK((l - expected).norm() < 1e-14);
}

TEST_CASE("morphism_ctr rejects non-symplectic S and detects non-canonical p") {
  const CHParams p = make_params({1, 1}, {1, 1, 1, 1});
  CHECK_THROWS_AS(morphism_ctr(p, 2.0 * Matrix::Identity(4, 4)), DomainError);
  const Matrix l = morphism_ctr(p, Matrix::Identity(4, 4));
  CHECK(std::abs(l.determinant()) < 1e-10);
}

TEST_CASE("morphism_obs identities") {
  std::mt19937_64 gen(41);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const Matrix q = random_spd(gen, 2 * n);
    const SPDMatrix spd(q);
    const PHSystem sys(n, spd, phtest::random_vector(gen, 2 * n, -1.0, 1.0));
    const WilliamsonFactors w = williamson(spd);
    const Matrix l = morphism_obs(sys, w.S);

    const CHParams p(n, w.d, w.S * sys.B);
    const Realization obs = build_observable(p);
    const Matrix jq = canonical_J(n) * spd.matrix();
    const RowVector bq = (sys.B.transpose() * spd.matrix()).eval();

    CHECK((obs.A * l - l * jq).norm() <= 1e-8 * std::max(1.0, (l * jq).norm()));
    CHECK((l * sys.B - obs.B).norm() <= 1e-8 * std::max(1.0, obs.B.norm()));
    CHECK((bq - obs.C * l).norm() <= 1e-8 * std::max(1.0, bq.norm()));
  }
}

TEST_CASE("morphism_obs on identity system and inconsistent S") {
  Vector b(2);
  b << 1, 0;
  const PHSystem sys(1, SPDMatrix(Matrix::Identity(2, 2)), b);
  const Matrix l = morphism_obs(sys, Matrix::Identity(2, 2));
  const CHParams p(1, Vector::Ones(1), b);
  const Realization obs = build_observable(p);
  const Matrix jq = canonical_J(1);
  CHECK((obs.A * l - l * jq).norm() < 1e-12);

  Matrix q2 = Matrix::Zero(2, 2);
  q2(0, 0) = 4.0;
  q2(1, 1) = 1.0;
  const PHSystem sys2(1, SPDMatrix(q2), b);
  CHECK_THROWS_AS(morphism_obs(sys2, Matrix::Identity(2, 2)), DomainError);
}

TEST_CASE("morphism_obs identities hold for the non-canonical circuit system") {
  const PHSystem sys = circuit_system();
  const WilliamsonFactors w = williamson(sys.Q);
  const Matrix l = morphism_obs(sys, w.S);
  const CHParams p(sys.n, w.d, w.S * sys.B);
  const Realization obs = build_observable(p);
  const Matrix jq = canonical_J(sys.n) * sys.Q.matrix();
  const RowVector bq = (sys.B.transpose() * sys.Q.matrix()).eval();
  CHECK((obs.A * l - l * jq).norm() <= 1e-8);
  CHECK((l * sys.B - obs.B).norm() <= 1e-8);
  CHECK((bq - obs.C * l).norm() <= 1e-8);
  Eigen::JacobiSVD<Matrix> svd(l);
  CHECK(svd.singularValues()(svd.singularValues().size() - 1) <
        1e-10 * svd.singularValues()(0));  // singular for non-canonical systems
}

TEST_CASE("is_canonical_params") {
  CHECK(is_canonical_params(make_params({1, 2}, {1, 1, 1, 1}), 1e-8));
  CHECK_FALSE(is_canonical_params(make_params({1, 1}, {1, 1, 1, 1}), 1e-8));
  CHECK_FALSE(is_canonical_params(make_params({1, 2}, {1, 0, 0, 0}), 1e-8));
}

TEST_CASE("controllability_det examples and product formula") {
  {
    const CHParams p = make_params({1}, {1, 0});
    const double det = controllability_det(p);
    CHECK(det == doctest::Approx(-1.0));
    CHECK(std::abs(det) == doctest::Approx(controllability_product_formula(p)));
  }
  {
    const CHParams p = make_params({1, 1}, {0.7, -0.2, 0.4, 1.1});
    CHECK(std::abs(controllability_det(p)) < 1e-10);
  }
  {
    // The (1,0,1,0) layout pairs (v_1, v_3) and (v_2, v_4); its second plane
    // radius vanishes, so both routes give zero.
    const CHParams p = make_params({1, 2}, {1, 0, 1, 0});
    CHECK(std::abs(controllability_det(p)) < 1e-10);
    CHECK(controllability_product_formula(p) == 0.0);
  }
  {
    const CHParams p = make_params({1, 2}, {1, 1, 0, 0});
    CHECK(std::abs(controllability_det(p)) == doctest::Approx(18.0).epsilon(1e-10));
    CHECK(controllability_product_formula(p) == doctest::Approx(18.0));
  }
}

TEST_CASE("controllability_det matches product formula on random inputs") {
  std::mt19937_64 gen(43);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const CHParams p = random_canonical_params(gen, n);
    const double det = std::abs(controllability_det(p));
    const double formula = controllability_product_formula(p);
    CHECK(det == doctest::Approx(formula).epsilon(1e-6));
  }
}

TEST_CASE("is_canonical_system") {
  CHECK(is_canonical_system(fk_system(), 1e-8));
  CHECK_FALSE(is_canonical_system(circuit_system(), 1e-8));
  const PHSystem zero_b(1, SPDMatrix(Matrix::Identity(2, 2)), Vector::Zero(2).eval());
  CHECK_FALSE(is_canonical_system(zero_b, 1e-8));
}

TEST_CASE("sys_equivalent") {
  const CHParams p = make_params({1, 2}, {1, 1, 1, 1});
  CHECK(sys_equivalent(p, p, 1e-9));

  Vector theta(2);
  theta << M_PI / 3.0, M_PI / 7.0;
  const GroupElement g({0, 1}, theta);
  CHECK(sys_equivalent(p, apply_group_action(g, p), 1e-9));

  CHECK_FALSE(sys_equivalent(p, make_params({1, 3}, {1, 1, 1, 1}), 1e-9));
  CHECK_THROWS_AS(sys_equivalent(p, make_params({1}, {1, 0}), 1e-9), DimensionError);
}

TEST_CASE("filter_equivalent_zero_state") {
  CHECK(filter_equivalent_zero_state(make_params({1}, {1, 0}), make_params({1}, {0, 1}), 1e-9));
  CHECK_FALSE(
      filter_equivalent_zero_state(make_params({1}, {1, 0}), make_params({2}, {1, 0}), 1e-9));

  // sys-equivalence implies filter equivalence.
  std::mt19937_64 gen(47);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const CHParams p = random_canonical_params(gen, n);
    const GroupElement g = random_group_element(gen, n);
    const CHParams q = apply_group_action(g, p);
    CHECK(sys_equivalent(p, q, 1e-8));
    CHECK(filter_equivalent_zero_state(p, q, 1e-8));
  }
}

TEST_CASE("star_equivalent_witness") {
  const CHParams p = make_params({1, 2}, {1, 1, 1, 1});
  CHECK(star_equivalent_witness(p, p, {0, 1}, Matrix::Identity(4, 4), 1e-10));

  // Torus rotation as witness: A = R(theta) with identity permutation.
  Vector theta(2);
  theta << 0.7, 2.1;
  const GroupElement g({0, 1}, theta);
  const CHParams q = apply_group_action(g, p);
  Matrix rot = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    rot(i, i) = std::cos(theta(i));
    rot(i, 2 + i) = -std::sin(theta(i));
    rot(2 + i, i) = std::sin(theta(i));
    rot(2 + i, 2 + i) = std::cos(theta(i));
  }
  CHECK(star_equivalent_witness(p, q, {0, 1}, rot, 1e-10));

  // Unrelated parameters fail with the identity witness.
  const CHParams r = make_params({1.5, 2.5}, {0.3, -1.0, 0.4, 0.2});
  CHECK_FALSE(star_equivalent_witness(p, r, {0, 1}, Matrix::Identity(4, 4), 1e-10));

  CHECK_THROWS_AS(star_equivalent_witness(p, p, {0, 1}, Matrix::Zero(4, 4), 1e-10), DomainError);
}

TEST_CASE("star_equivalent_witness with permutation") {
  std::mt19937_64 gen(53);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(gen() % 3);
    const CHParams p = random_canonical_params(gen, n);
    const GroupElement g = random_group_element(gen, n);
    const CHParams q = apply_group_action(g, p);
    // Witness pair: P from sigma and A = P^T R P, so that P A v = R P v.
    Matrix p_sigma = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) p_sigma(i, g.sigma[static_cast<std::size_t>(i)]) = 1.0;
    Matrix pp = Matrix::Zero(2 * n, 2 * n);
    pp.topLeftCorner(n, n) = p_sigma;
    pp.bottomRightCorner(n, n) = p_sigma;
    Matrix rot = Matrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      rot(i, i) = std::cos(g.theta(i));
      rot(i, n + i) = -std::sin(g.theta(i));
      rot(n + i, i) = std::sin(g.theta(i));
      rot(n + i, n + i) = std::cos(g.theta(i));
    }
    const Matrix a = pp.transpose() * rot * pp;
    CHECK(star_equivalent_witness(p, q, g.sigma, a, 1e-9));
  }
}

TEST_CASE("apply_group_action examples") {
  const CHParams p = make_params({1.5}, {1, 0});
  const GroupElement identity({0}, Vector::Zero(1).eval());
  const CHParams same = apply_group_action(identity, p);
  CHECK((same.d - p.d).norm() == 0.0);
  CHECK((same.v - p.v).norm() == 0.0);

  Vector quarter(1);
  quarter << M_PI / 2.0;
  const CHParams rotated = apply_group_action(GroupElement({0}, quarter), make_params({1}, {1, 0}));
  CHECK(rotated.v(0) == doctest::Approx(0.0));
  CHECK(rotated.v(1) == doctest::Approx(1.0));
}

TEST_CASE("group action composition law") {
  std::mt19937_64 gen(59);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const CHParams p = random_canonical_params(gen, n);
    const GroupElement g1 = random_group_element(gen, n);
    const GroupElement g2 = random_group_element(gen, n);
    const CHParams lhs = apply_group_action(compose(g1, g2), p);
    const CHParams rhs = apply_group_action(g1, apply_group_action(g2, p));
    CHECK((lhs.d - rhs.d).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((lhs.v - rhs.v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("canonical_coords examples") {
  const CanonicalCoords c1 = canonical_coords(make_params({1, 2}, {1, 1, 1, 1}));
  CHECK(c1.d_up(0) == doctest::Approx(1.0));
  CHECK(c1.d_up(1) == doctest::Approx(2.0));
  CHECK(c1.R(0) == doctest::Approx(2.0));
  CHECK(c1.R(1) == doctest::Approx(2.0));

  const CanonicalCoords c2 = canonical_coords(make_params({2, 1}, {1, 2, 3, 4}));
  CHECK(c2.d_up(0) == doctest::Approx(1.0));
  CHECK(c2.d_up(1) == doctest::Approx(2.0));
  CHECK(c2.R(0) == doctest::Approx(20.0));
  CHECK(c2.R(1) == doctest::Approx(10.0));

  CHECK_THROWS_AS(canonical_coords(make_params({1, 1}, {1, 1, 1, 1})), DomainError);
}

TEST_CASE("canonical_coords is constant on orbits") {
  std::mt19937_64 gen(61);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const CHParams p = random_canonical_params(gen, n);
    const GroupElement g = random_group_element(gen, n);
    const CanonicalCoords c1 = canonical_coords(p);
    const CanonicalCoords c2 = canonical_coords(apply_group_action(g, p));
    CHECK((c1.d_up - c2.d_up).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((c1.R - c2.R).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("params_from_coords") {
  Vector d(2), r(2);
  d << 1, 2;
  r << 2, 2;
  const CHParams p = params_from_coords(CanonicalCoords(d, r));
  CHECK(p.d(0) == 1.0);
  CHECK(p.d(1) == 2.0);
  CHECK(p.v(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.v(1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.v(2) == 0.0);
  CHECK(p.v(3) == 0.0);

  std::mt19937_64 gen(67);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 4);
    Vector dd(n), rr(n);
    double acc = phtest::uniform(gen, 0.2, 1.0);
    for (int i = 0; i < n; ++i) {
      dd(i) = acc;
      acc += phtest::uniform(gen, 0.2, 1.0);
      rr(i) = phtest::uniform(gen, 0.1, 3.0);
    }
    const CanonicalCoords c(dd, rr);
    const CanonicalCoords back = canonical_coords(params_from_coords(c));
    CHECK((back.d_up - dd).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.R - rr).cwiseAbs().maxCoeff() <= 1e-15 * rr.maxCoeff());
  }
}

TEST_CASE("params_from_coords representative is filter-equivalent") {
  std::mt19937_64 gen(71);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 3);
    const CHParams p = random_canonical_params(gen, n);
    const CHParams rep_p = params_from_coords(canonical_coords(p));
    CHECK(filter_equivalent_zero_state(p, rep_p, 1e-8));
    CHECK(sys_equivalent(p, rep_p, 1e-8));
  }
}

TEST_CASE("build_O") {
  const EmbeddingMap id_map = build_O(2, 2);
  CHECK((id_map.O - Matrix::Identity(4, 4)).norm() == 0.0);

  const EmbeddingMap m12 = build_O(1, 2);
  // (q1, p1, q2, p2-blocks) -> (q1, q2, p1, p2)
  Vector src(4);
  src << 10, 20, 30, 40;  // q1, p1, q2, p2
  const Vector dst = m12.O * src;
  CHECK(dst(0) == 10.0);
  CHECK(dst(1) == 30.0);
  CHECK(dst(2) == 20.0);
  CHECK(dst(3) == 40.0);

  for (int n = 1; n <= 3; ++n) {
    for (int m = n; m <= n + 3; ++m) {
      const EmbeddingMap em = build_O(n, m);
      CHECK((em.O * em.O.transpose() - Matrix::Identity(2 * m, 2 * m)).norm() == 0.0);
      Matrix small = Matrix::Zero(2 * m, 2 * m);
      small.topLeftCorner(2 * n, 2 * n) = canonical_J(n);
      if (m > n) {
        small.bottomRightCorner(2 * (m - n), 2 * (m - n)) = canonical_J(m - n);
      }
      CHECK((em.O * small * em.O.transpose() - canonical_J(m)).norm() == 0.0);
    }
  }
  CHECK_THROWS_AS(build_O(3, 2), DomainError);
}

TEST_CASE("embed_system morphism conditions") {
  std::mt19937_64 gen(73);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 3);
    const int m = n + static_cast<int>(gen() % 3);
    const Matrix q = random_spd(gen, 2 * n);
    const PHSystem sys(n, SPDMatrix(q), phtest::random_vector(gen, 2 * n, -1.0, 1.0));
    const EmbeddedSystem lifted = embed_system(sys, m);

    const Matrix l = lifted.map.O.leftCols(2 * n);  // O [I; 0]
    const Matrix jq_small = canonical_J(n) * sys.Q.matrix();
    const Matrix jq_big = canonical_J(m) * lifted.system.Q.matrix();
    CHECK((l * jq_small - jq_big * l).norm() <= 1e-10 * std::max(1.0, jq_big.norm()));
    CHECK((l * sys.B - lifted.system.B).norm() == 0.0);
    const RowVector readout_small = (sys.B.transpose() * sys.Q.matrix()).eval();
    const RowVector readout_big =
        (lifted.system.B.transpose() * lifted.system.Q.matrix()).eval();
    CHECK((readout_small - readout_big * l).norm() <= 1e-10 * std::max(1.0, readout_small.norm()));
  }
}

TEST_CASE("embed_system keeps m = n unchanged") {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 4.0;
  q(1, 1) = 1.0;
  Vector b(2);
  b << 1, 0;
  const PHSystem sys(1, SPDMatrix(q), b);
  const EmbeddedSystem same = embed_system(sys, 1);
  CHECK((same.system.Q.matrix() - q).norm() == 0.0);
  CHECK((same.system.B - b).norm() == 0.0);
}

TEST_CASE("extend_params") {
  const CHParams p = make_params({3}, {1, 2});
  const CHParams e = extend_params(p, 2);
  CHECK(e.d(0) == 3.0);
  CHECK(e.d(1) == 1.0);
  CHECK(e.v(0) == 1.0);
  CHECK(e.v(1) == 0.0);
  CHECK(e.v(2) == 2.0);
  CHECK(e.v(3) == 0.0);

  const CHParams same = extend_params(p, 1);
  CHECK((same.d - p.d).norm() == 0.0);
  CHECK((same.v - p.v).norm() == 0.0);

  // Lifted parameters are never canonical for m > n.
  std::mt19937_64 gen(79);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(gen() % 3);
    const CHParams base = random_canonical_params(gen, n);
    const CHParams lifted = extend_params(base, n + 1 + static_cast<int>(gen() % 2));
    CHECK_FALSE(is_canonical_params(lifted, 1e-8));
  }

  CHECK_THROWS_AS(extend_params(p, 0), DomainError);
}
