#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "rpzf/linalg.hpp"
#include "rpzf/numeric.hpp"

using namespace rpzf;

TEST_CASE("matrix product against a hand-computed example") {
  Matrix a(2, 3);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(0, 2) = 3;
  a(1, 0) = 4;
  a(1, 1) = 5;
  a(1, 2) = 6;
  Matrix b(3, 2);
  b(0, 0) = 7;
  b(1, 0) = 9;
  b(2, 0) = 11;
  b(0, 1) = 8;
  b(1, 1) = 10;
  b(2, 1) = 12;
  Matrix c = a * b;
  CHECK(c(0, 0) == 58);
  CHECK(c(0, 1) == 64);
  CHECK(c(1, 0) == 139);
  CHECK(c(1, 1) == 154);
  CHECK_THROWS_AS(a * c, DomainError);
}

TEST_CASE("identity, block, norms") {
  Matrix i3 = Matrix::identity(3);
  CHECK(i3(1, 1) == 1.0);
  CHECK(i3(0, 1) == 0.0);
  CHECK(i3.inf_norm() == 1.0);
  Matrix m(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = 3.0 * r + c;
  Matrix blk = m.block(1, 1, 3, 3);
  CHECK(blk.rows() == 2);
  CHECK(blk(0, 0) == 4.0);
  CHECK(blk(1, 1) == 8.0);
  CHECK(m.row_sum(1) == 12.0);
  CHECK(m.max_abs() == 8.0);
  CHECK_THROWS_AS(m.block(0, 0, 4, 2), DomainError);
}

TEST_CASE("lu solve recovers a known solution") {
  // A x = b with A = [[2,1,1],[4,-6,0],[-2,7,2]], x = (1,2,3)
  Matrix a(3, 3);
  a(0, 0) = 2;
  a(0, 1) = 1;
  a(0, 2) = 1;
  a(1, 0) = 4;
  a(1, 1) = -6;
  a(1, 2) = 0;
  a(2, 0) = -2;
  a(2, 1) = 7;
  a(2, 2) = 2;
  std::vector<double> x_true{1, 2, 3};
  std::vector<double> b(3, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i] += a(i, j) * x_true[j];
  std::vector<double> x = LuDecomposition(a).solve(b);
  for (int i = 0; i < 3; ++i) CHECK_THAT(x[i], Catch::Matchers::WithinAbs(x_true[i], 1e-12));
}

TEST_CASE("lu matrix solve inverts") {
  Matrix a(2, 2);
  a(0, 0) = 4;
  a(0, 1) = 3;
  a(1, 0) = 6;
  a(1, 1) = 3;
  Matrix inv = LuDecomposition(a).solve(Matrix::identity(2));
  Matrix prod = a * inv;
  CHECK((prod - Matrix::identity(2)).max_abs() < 1e-14);
}

TEST_CASE("lu needs pivoting for a zero leading entry") {
  Matrix a(2, 2);
  a(0, 0) = 0;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 0;
  std::vector<double> x = LuDecomposition(a).solve(std::vector<double>{5.0, 7.0});
  CHECK_THAT(x[0], Catch::Matchers::WithinAbs(7.0, 1e-14));
  CHECK_THAT(x[1], Catch::Matchers::WithinAbs(5.0, 1e-14));
}

TEST_CASE("lu reports singular matrices") {
  Matrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 2;
  a(1, 1) = 4;
  CHECK_THROWS_AS(LuDecomposition(a), NumericalError);
  CHECK_THROWS_AS(LuDecomposition(Matrix(2, 3)), DomainError);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -0.4367}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("matrix csv export") {
  Matrix m(2, 2);
  m(0, 0) = 0.5;
  m(0, 1) = 1;
  m(1, 0) = 0;
  m(1, 1) = 0.25;
  CHECK(matrix_to_csv(m) == "0.5,1\n0,0.25\n");
}

TEST_CASE("binomial helpers") {
  CHECK(binomial_coefficient(5, 2) == 10.0);
  CHECK(binomial_coefficient(64, 32) == Catch::Approx(1.8326241409425905e18).epsilon(1e-12));
  CHECK(binomial_coefficient(5, 7) == 0.0);
  CHECK(pow0(0.0, 0) == 1.0);
  CHECK(pow0(0.7, 2) == Catch::Approx(0.49));
  double total = 0.0;
  for (int k = 0; k <= 6; ++k) total += binomial_pmf(6, k, 0.3);
  CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-14));
}
