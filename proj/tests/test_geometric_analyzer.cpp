#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "crm/geometric_analyzer.hpp"
#include "test_support.hpp"

using namespace crm;
using namespace crmtest;

namespace {

const TolerancePolicy kTol;

// Conformality contract of a claimed Conf subspace: C ⊕ ker = domain and
// ⟨T u, T v⟩_W = r ⟨u, v⟩_V on the basis Gram.
void check_conf_subspace(const MapBetween& t, const SubspaceBasis& conf, double r,
                         int nullity) {
  const Index n = t.domain.dim();
  REQUIRE(conf.count() + nullity == n);

  Matrix stacked(n, n);
  stacked.leftCols(conf.count()) = conf.vectors;
  stacked.rightCols(nullity) = kernel_basis(t, kTol).vectors;
  Eigen::JacobiSVD<Matrix> joint(t.domain.whiten(stacked));
  CHECK(numerical_rank(joint.singularValues(), kTol) == n);

  const Matrix image = t.matrix * conf.vectors;
  const Matrix image_gram = image.transpose() * t.codomain.gram() * image;
  const Matrix domain_gram =
      conf.vectors.transpose() * t.domain.gram() * conf.vectors;
  CHECK((image_gram - r * domain_gram).norm() <
        kTol.residual_tol * std::max(1.0, image_gram.norm()));
}

}  // namespace

TEST_CASE("reference map: geometric with point factor 4") {
  const GeometricAnalysis a = analyze(example7_map(), kTol);
  CHECK(a.is_geometric);
  CHECK(a.rank == 2);
  CHECK(a.nullity == 1);
  CHECK(a.singular_values(0) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(a.singular_values(1) == doctest::Approx(2.0));
  CHECK(a.sigma_min_multiplicity == 1);
  CHECK(a.factors.kind == FactorSetKind::point);
  CHECK(a.factors.canonical == doctest::Approx(4.0));
  REQUIRE(a.conf_basis.has_value());
  check_conf_subspace(example7_map(), *a.conf_basis, 4.0, 1);
}

TEST_CASE("diag(2,3) is not geometric") {
  Matrix m(2, 2);
  m << 2, 0, 0, 3;
  const GeometricAnalysis a =
      analyze(MapBetween(m, InnerSpace::euclidean(2), InnerSpace::euclidean(2)), kTol);
  CHECK_FALSE(a.is_geometric);
  CHECK(a.factors.kind == FactorSetKind::empty);
  CHECK_FALSE(a.conf_basis.has_value());
}

TEST_CASE("zero map: geometric by convention, canonical factor 1") {
  const MapBetween zero(Matrix::Zero(3, 2), InnerSpace::euclidean(2),
                        InnerSpace::euclidean(3));
  const GeometricAnalysis a = analyze(zero, kTol);
  CHECK(a.is_geometric);
  CHECK(a.rank == 0);
  CHECK(a.factors.kind == FactorSetKind::half_open_interval);
  CHECK(std::isinf(a.factors.upper));
  CHECK(a.factors.canonical == 1.0);
  CHECK(a.factors.contains(1e6));
  CHECK_FALSE(a.factors.contains(-1.0));
  CHECK_FALSE(a.conf_basis.has_value());
}

TEST_CASE("exponential fixture at the origin: interval (0,1] containing 1") {
  const Vector a0 = Vector::Zero(4);
  const MapBetween df(example8_jacobian(a0), InnerSpace::euclidean(4),
                      InnerSpace::euclidean(4));
  const GeometricAnalysis a = analyze(df, kTol);
  CHECK(a.is_geometric);
  CHECK(a.rank == 2);
  CHECK(a.nullity == 2);
  CHECK(a.factors.kind == FactorSetKind::half_open_interval);
  // row Gram [[2,1],[1,2]] has eigenvalues 3 and 1
  CHECK(a.factors.upper == doctest::Approx(1.0));
  CHECK(a.factors.contains(std::exp(0.0)));

  const OracleResult oracle = oracle_is_geometric(df, kTol, 20, 99);
  CHECK(oracle.verdict);
  CHECK(oracle.residual < 1e-8);
}

TEST_CASE("construct_conf_subspace") {
  SUBCASE("reference map at the canonical factor") {
    const SubspaceBasis c = construct_conf_subspace(example7_map(), 4.0, kTol);
    check_conf_subspace(example7_map(), c, 4.0, 1);
  }
  SUBCASE("full-rank conformal map returns the whole domain") {
    std::mt19937_64 rng(5);
    const Matrix q = random_orthogonal(rng, 3);
    const MapBetween t(2.0 * q, InnerSpace::euclidean(3), InnerSpace::euclidean(3));
    const SubspaceBasis c = construct_conf_subspace(t, 4.0, kTol);
    check_conf_subspace(t, c, 4.0, 0);
  }
  SUBCASE("exponential fixture at the origin with r = 1") {
    const MapBetween df(example8_jacobian(Vector::Zero(4)),
                        InnerSpace::euclidean(4), InnerSpace::euclidean(4));
    const SubspaceBasis c = construct_conf_subspace(df, 1.0, kTol);
    check_conf_subspace(df, c, 1.0, 2);
    const Matrix image = df.matrix * c.vectors;
    CHECK((image.transpose() * image - Matrix::Identity(2, 2)).norm() < 1e-8);
  }
  SUBCASE("inadmissible factors throw") {
    CHECK_THROWS_AS(construct_conf_subspace(example7_map(), 1.0, kTol),
                    std::domain_error);
    CHECK_THROWS_AS(construct_conf_subspace(example7_map(), 9.0, kTol),
                    std::domain_error);
    const MapBetween zero(Matrix::Zero(2, 2), InnerSpace::euclidean(2),
                          InnerSpace::euclidean(2));
    CHECK_THROWS_AS(construct_conf_subspace(zero, 1.0, kTol), std::domain_error);
  }
}

TEST_CASE("search oracle on the fixtures") {
  SUBCASE("reference map") {
    const OracleResult r = oracle_is_geometric(example7_map(), kTol, 20, 1);
    CHECK(r.verdict);
    CHECK(r.residual < 1e-8);
  }
  SUBCASE("diag(2,3) stays away from zero residual") {
    Matrix m(2, 2);
    m << 2, 0, 0, 3;
    const MapBetween t(m, InnerSpace::euclidean(2), InnerSpace::euclidean(2));
    const OracleResult r = oracle_is_geometric(t, kTol, 40, 2);
    CHECK_FALSE(r.verdict);
    // best achievable is |S - 6.5 I|_F / |S|_F with S = diag(4,9)
    CHECK(r.residual == doctest::Approx(std::sqrt(12.5) / std::sqrt(97.0)));
  }
  SUBCASE("zero map") {
    const MapBetween zero(Matrix::Zero(2, 3), InnerSpace::euclidean(3),
                          InnerSpace::euclidean(2));
    const OracleResult r = oracle_is_geometric(zero, kTol, 5, 3);
    CHECK(r.verdict);
    CHECK(r.residual == 0.0);
  }
}

TEST_CASE("detector and oracle agree away from cluster boundaries") {
  std::mt19937_64 rng(101);
  int compared = 0, agreed = 0;
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = dim(rng), n = dim(rng);
    const MapBetween t(random_matrix(rng, m, n), random_space(rng, n),
                       random_space(rng, m));
    const GeometricAnalysis a = analyze(t, kTol);

    // skip spectral-margin boundary cases
    bool boundary = false;
    const int rank = a.rank;
    if (rank > 0) {
      const double scale = a.singular_values(0);
      for (int i = 0; i + 1 < rank; ++i) {
        const double gap = a.singular_values(i) - a.singular_values(i + 1);
        if (gap < 10.0 * kTol.cluster_rel_tol * scale &&
            gap > 0.1 * kTol.cluster_rel_tol * scale) {
          boundary = true;
        }
      }
    }
    if (boundary) continue;

    const OracleResult oracle = oracle_is_geometric(t, kTol, 20, 1000 + trial);
    ++compared;
    if (oracle.verdict == a.is_geometric) ++agreed;
  }
  REQUIRE(compared > 150);
  CHECK(static_cast<double>(agreed) / compared >= 0.99);
}

TEST_CASE("factor set scales quadratically with the map") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    const GeometricSample sample = random_geometric_map(rng, 4);
    const double c = 0.3 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const MapBetween scaled(c * sample.map.matrix, sample.map.domain,
                            sample.map.codomain);
    const GeometricAnalysis a = analyze(sample.map, kTol);
    const GeometricAnalysis as = analyze(scaled, kTol);
    CHECK(a.is_geometric == as.is_geometric);
    CHECK(a.factors.kind == as.factors.kind);
    CHECK(as.factors.canonical ==
          doctest::Approx(c * c * a.factors.canonical).epsilon(1e-8));
  }
  // non-geometric maps stay non-geometric under scaling
  Matrix m(2, 2);
  m << 2, 0, 0, 3;
  const MapBetween t(m, InnerSpace::euclidean(2), InnerSpace::euclidean(2));
  const MapBetween t5(5.0 * m, InnerSpace::euclidean(2), InnerSpace::euclidean(2));
  CHECK(analyze(t, kTol).is_geometric == analyze(t5, kTol).is_geometric);
}

TEST_CASE("witness validity across sampled admissible factors") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const GeometricSample sample = random_geometric_map(rng, 5);
    const GeometricAnalysis a = analyze(sample.map, kTol);
    REQUIRE(a.is_geometric);
    CHECK(a.rank == sample.rank);

    std::vector<double> factors{a.factors.canonical};
    if (a.factors.kind == FactorSetKind::half_open_interval) {
      factors.push_back(unit(rng) * a.factors.upper);
    }
    for (double r : factors) {
      const SubspaceBasis c = construct_conf_subspace(sample.map, r, kTol);
      check_conf_subspace(sample.map, c, r, a.nullity);
    }
  }
}

TEST_CASE("full-rank square maps are geometric iff the spectrum is one cluster") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(trial % 3);
    const bool one_cluster = trial % 2 == 0;
    Vector sigmas(n);
    for (int i = 0; i < n; ++i) {
      sigmas(i) = one_cluster ? 1.7 : 1.7 + 0.9 * (n - i);
    }
    const MapBetween t = map_with_whitened_spectrum(rng, sigmas, n, n);
    const GeometricAnalysis a = analyze(t, kTol);
    REQUIRE(a.nullity == 0);
    CHECK(a.is_geometric == one_cluster);
  }
}
