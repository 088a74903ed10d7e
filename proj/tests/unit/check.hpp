#pragma once

#include <cmath>

#include <doctest.h>

#define CHECK_NEAR(a, b, tol) CHECK(std::abs(double(a) - double(b)) <= (tol))
#define REQUIRE_NEAR(a, b, tol) REQUIRE(std::abs(double(a) - double(b)) <= (tol))
