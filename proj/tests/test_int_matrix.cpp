#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tropsplit/int_matrix.hpp"

using namespace tropsplit;

namespace {

IntMatrix mat(const std::vector<std::vector<long>>& rows) {
  std::vector<ZVec> zr;
  for (const auto& r : rows) {
    ZVec z;
    for (long x : r) z.push_back(Int(x));
    zr.push_back(z);
  }
  return IntMatrix::from_rows(zr);
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                        std::size_t cols, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = Int(d(rng));
  return m;
}

bool is_divisibility_chain(const IntMatrix& diag) {
  std::size_t n = std::min(diag.rows(), diag.cols());
  bool seen_zero = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Int& d = diag.at(i, i);
    if (d < 0) return false;
    if (d == 0) {
      seen_zero = true;
      continue;
    }
    if (seen_zero) return false;
    if (i + 1 < n && diag.at(i + 1, i + 1) != 0 &&
        diag.at(i + 1, i + 1) % d != 0)
      return false;
  }
  for (std::size_t i = 0; i < diag.rows(); ++i)
    for (std::size_t j = 0; j < diag.cols(); ++j)
      if (i != j && diag.at(i, j) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("smith normal form on pinned examples") {
  SUBCASE("[[2,4],[6,8]] has divisors 2,4") {
    // Determinant is -8 and the entry gcd is 2, so the chain must be (2, 4).
    auto snf = smith_normal_form(mat({{2, 4}, {6, 8}}));
    CHECK(snf.diag.at(0, 0) == 2);
    CHECK(snf.diag.at(1, 1) == 4);
  }
  SUBCASE("identity") {
    auto snf = smith_normal_form(IntMatrix::identity(2));
    CHECK(snf.diag == IntMatrix::identity(2));
  }
  SUBCASE("2x3 zero matrix") {
    auto snf = smith_normal_form(IntMatrix(2, 3));
    CHECK(snf.diag == IntMatrix(2, 3));
    CHECK(snf.rank() == 0);
  }
}

TEST_CASE("smith normal form round trip on random matrices") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    IntMatrix m = random_matrix(rng, dim(rng), dim(rng), -9, 9);
    auto snf = smith_normal_form(m);
    CHECK(snf.left * m * snf.right == snf.diag);
    CHECK(is_divisibility_chain(snf.diag));
    CHECK(abs(oracle::det_cofactor(snf.left)) == 1);
    CHECK(abs(oracle::det_cofactor(snf.right)) == 1);
    CHECK(snf.left * snf.left_inv == IntMatrix::identity(m.rows()));
    CHECK(snf.right * snf.right_inv == IntMatrix::identity(m.cols()));
    Int prod = 1;
    for (const Int& d : snf.divisors()) prod *= d;
    CHECK(prod == oracle::divisor_product_via_minors(m));
  }
}

TEST_CASE("sublattice index") {
  CHECK(sublattice_index(mat({{1, 0}, {0, 1}}), 2) == Int(1));
  // Coset representatives fill the box [0,2) x [0,3).
  CHECK(sublattice_index(mat({{2, 0}, {0, 3}}), 2) == Int(6));
  CHECK(!sublattice_index(mat({{1}, {1}}), 2).has_value());
}

TEST_CASE("sublattice index agrees with brute-force coset enumeration") {
  std::mt19937_64 rng(99123);
  int accepted = 0;
  while (accepted < 200) {
    std::uniform_int_distribution<std::size_t> dim(1, 3);
    std::size_t n = dim(rng);
    IntMatrix m = random_matrix(rng, n, dim(rng), -5, 5);
    auto idx = sublattice_index(m, n);
    if (idx.has_value()) {
      bool small = true;
      for (const Int& d : smith_normal_form(m).divisors())
        if (d > 6) small = false;
      if (!small) continue;
    }
    auto brute = oracle::coset_count(m, n, 60);
    REQUIRE(idx.has_value() == brute.has_value());
    if (idx) CHECK(*idx == *brute);
    ++accepted;
  }
}

TEST_CASE("saturate") {
  SUBCASE("primitive rescaling") {
    IntMatrix s = saturate(mat({{2}, {0}}));
    CHECK(s == mat({{1}, {0}}));
    CHECK(saturate(mat({{2}, {2}})) == mat({{1}, {1}}));
  }
  SUBCASE("full-rank sublattice saturates to the whole lattice") {
    IntMatrix s = saturate(mat({{1, 1}, {0, 2}}));
    CHECK(s.cols() == 2);
    CHECK(sublattice_index(s, 2) == Int(1));
  }
  SUBCASE("idempotent and index one") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 50; ++trial) {
      std::uniform_int_distribution<std::size_t> dim(1, 4);
      IntMatrix m = random_matrix(rng, dim(rng), dim(rng), -6, 6);
      IntMatrix s = saturate(m);
      CHECK(saturate(s) == s);
      CHECK(saturation_index(s) == 1);
      // the saturation contains the original columns
      for (std::size_t j = 0; j < m.cols(); ++j)
        CHECK(in_column_span(s, m.column(j)));
    }
  }
}

TEST_CASE("saturation index") {
  CHECK(saturation_index(mat({{2}})) == 2);
  CHECK(saturation_index(IntMatrix::identity(3)) == 1);
  CHECK(saturation_index(mat({{1, 1}, {1, -1}})) == 2);
}

TEST_CASE("saturation index agrees with the minor gcd oracle") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 3);
    IntMatrix m = random_matrix(rng, dim(rng), dim(rng), -5, 5);
    CHECK(saturation_index(m) == oracle::divisor_product_via_minors(m));
  }
}

TEST_CASE("kernel, image, cokernel") {
  SUBCASE("row [2,-2]") {
    auto kic = kernel_image_cokernel(mat({{2, -2}}));
    CHECK(kic.kernel_basis.cols() == 1);
    CHECK(abs(kic.kernel_basis.at(0, 0)) == 1);
    CHECK(kic.kernel_basis.at(0, 0) == kic.kernel_basis.at(1, 0));
    CHECK(kic.image_basis.cols() == 1);
    CHECK(abs(kic.image_basis.at(0, 0)) == 2);
    CHECK(kic.cokernel.free_rank == 0);
    CHECK(kic.cokernel.torsion == std::vector<Int>{Int(2)});
  }
  SUBCASE("identity") {
    auto kic = kernel_image_cokernel(IntMatrix::identity(3));
    CHECK(kic.kernel_basis.cols() == 0);
    CHECK(kic.image_basis.cols() == 3);
    CHECK(kic.cokernel.free_rank == 0);
    CHECK(kic.cokernel.torsion.empty());
  }
  SUBCASE("zero map") {
    auto kic = kernel_image_cokernel(IntMatrix(1, 1));
    CHECK(kic.kernel_basis.cols() == 1);
    CHECK(kic.image_basis.cols() == 0);
    CHECK(kic.cokernel.free_rank == 1);
    CHECK(kic.cokernel.projection_to_free == IntMatrix::identity(1));
  }
  SUBCASE("projection annihilates the image") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 60; ++trial) {
      std::uniform_int_distribution<std::size_t> dim(1, 4);
      IntMatrix m = random_matrix(rng, dim(rng), dim(rng), -7, 7);
      auto kic = kernel_image_cokernel(m);
      IntMatrix composed = kic.cokernel.projection_to_free * m;
      CHECK(composed.is_zero());
      CHECK((m * kic.kernel_basis).is_zero());
      // kernel is saturated
      if (kic.kernel_basis.cols() > 0)
        CHECK(saturation_index(kic.kernel_basis) == 1);
      // image basis columns solve m x = column
      for (std::size_t j = 0; j < kic.image_basis.cols(); ++j)
        CHECK(solve_integer(m, kic.image_basis.submatrix_columns({j}))
                  .has_value());
    }
  }
}

TEST_CASE("lattice fiber product") {
  SUBCASE("x2 against x3") {
    auto fp = lattice_fiber_product(mat({{2}}), mat({{3}}));
    CHECK(fp.rank == 1);
    CHECK(abs(fp.into_first.at(0, 0)) == 3);
    CHECK(abs(fp.into_second.at(0, 0)) == 2);
  }
  SUBCASE("diagonal") {
    auto fp =
        lattice_fiber_product(IntMatrix::identity(2), IntMatrix::identity(2));
    CHECK(fp.rank == 2);
    CHECK(fp.into_first == fp.into_second);
  }
  SUBCASE("x2 against zero") {
    auto fp = lattice_fiber_product(mat({{2}}), IntMatrix(1, 1));
    CHECK(fp.rank == 1);
    CHECK(fp.into_first.at(0, 0) == 0);
    CHECK(abs(fp.into_second.at(0, 0)) == 1);
  }
  SUBCASE("output is saturated") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 50; ++trial) {
      std::uniform_int_distribution<std::size_t> dim(1, 3);
      std::size_t t = dim(rng);
      IntMatrix f = random_matrix(rng, t, dim(rng), -4, 4);
      IntMatrix g = random_matrix(rng, t, dim(rng), -4, 4);
      auto fp = lattice_fiber_product(f, g);
      IntMatrix basis = fp.into_first.vstack(fp.into_second);
      if (basis.cols() > 0) {
        CHECK(saturation_index(basis) == 1);
        CHECK(saturate(basis) == hnf_column_basis(basis));
      }
      CHECK(f * fp.into_first == g * fp.into_second);
    }
  }
}

TEST_CASE("integer solve") {
  auto x = solve_integer(mat({{2, 0}, {0, 3}}), mat({{4}, {9}}));
  REQUIRE(x.has_value());
  CHECK(x->at(0, 0) == 2);
  CHECK(x->at(1, 0) == 3);
  CHECK(!solve_integer(mat({{2}}), mat({{3}})).has_value());
  CHECK(!solve_integer(mat({{1}, {1}}), mat({{1}, {2}})).has_value());
}

TEST_CASE("rank-zero and empty matrices are legal everywhere") {
  IntMatrix empty(0, 0);
  CHECK(smith_normal_form(empty).rank() == 0);
  CHECK(sublattice_index(empty, 0) == Int(1));
  CHECK(saturation_index(empty) == 1);
  CHECK(saturate(IntMatrix(3, 0)).cols() == 0);
  auto kic = kernel_image_cokernel(IntMatrix(2, 0));
  CHECK(kic.kernel_basis.cols() == 0);
  CHECK(kic.cokernel.free_rank == 2);
  auto fp = lattice_fiber_product(IntMatrix(0, 2), IntMatrix(0, 3));
  CHECK(fp.rank == 5);  // over the zero lattice everything pairs
}

TEST_CASE("hermite column basis is canonical") {
  // two presentations of the same lattice
  IntMatrix a = mat({{2, 1}, {0, 1}});
  IntMatrix b = mat({{1, 3}, {1, 1}});
  CHECK(hnf_column_basis(a) == hnf_column_basis(b));
}
