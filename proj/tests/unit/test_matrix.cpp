#include "covchain/errors.hpp"
#include "covchain/matrix.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace covchain;

TEST_CASE("matrix indexing and max_abs") {
    Matrix m(2, 3, 1.5);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    m(1, 2) = -4.0;
    CHECK(m(1, 2) == -4.0);
    CHECK(m(0, 0) == 1.5);
    CHECK(m.max_abs() == 4.0);
    CHECK(Matrix().empty());
}

TEST_CASE("lu solves a fixed 3x3 system") {
    // x = (1, -2, 3) under A below; b computed by hand.
    Matrix a(3, 3);
    a(0, 0) = 2;  a(0, 1) = 1;  a(0, 2) = -1;
    a(1, 0) = -3; a(1, 1) = -1; a(1, 2) = 2;
    a(2, 0) = -2; a(2, 1) = 1;  a(2, 2) = 2;
    const std::vector<double> b = {2 - 2 - 3, -3 + 2 + 6, -2 - 2 + 6};

    LuDecomposition lu(a);
    const std::vector<double> x = lu.solve(b);
    REQUIRE(x.size() == 3);
    CHECK(std::abs(x[0] - 1.0) < 1e-12);
    CHECK(std::abs(x[1] + 2.0) < 1e-12);
    CHECK(std::abs(x[2] - 3.0) < 1e-12);
}

TEST_CASE("lu reuses one factorization for several right-hand sides") {
    Matrix a(2, 2);
    a(0, 0) = 4; a(0, 1) = 1;
    a(1, 0) = 1; a(1, 1) = 3;
    LuDecomposition lu(a);
    const std::vector<double> e0 = lu.solve({1, 0});
    const std::vector<double> e1 = lu.solve({0, 1});
    // Inverse of [[4,1],[1,3]] is [[3,-1],[-1,4]]/11.
    CHECK(std::abs(e0[0] - 3.0 / 11) < 1e-12);
    CHECK(std::abs(e0[1] + 1.0 / 11) < 1e-12);
    CHECK(std::abs(e1[0] + 1.0 / 11) < 1e-12);
    CHECK(std::abs(e1[1] - 4.0 / 11) < 1e-12);
}

TEST_CASE("singular systems are rejected") {
    Matrix a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2;
    a(1, 0) = 2; a(1, 1) = 4;
    CHECK_THROWS_AS(LuDecomposition{a}, NumericalError);
    CHECK_THROWS_AS(solve_linear(a, {1, 1}), NumericalError);
}

TEST_CASE("solve_linear matches permuted pivoting") {
    // First pivot is zero, forcing a row swap.
    Matrix a(2, 2);
    a(0, 0) = 0; a(0, 1) = 1;
    a(1, 0) = 1; a(1, 1) = 0;
    const std::vector<double> x = solve_linear(a, {5, 7});
    CHECK(x[0] == 7.0);
    CHECK(x[1] == 5.0);
}
