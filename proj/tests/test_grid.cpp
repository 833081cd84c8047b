#include <doctest.h>

#include "tamedheat/errors.hpp"
#include "tamedheat/grid.hpp"

using namespace tamedheat;

TEST_CASE("make_grid basic arithmetic") {
  const GridConfig g = make_grid(1, {1, 4});
  CHECK(g.h() == 1.0 / 16.0);
  CHECK(g.num_space() == 2);
  CHECK(g.num_time() == 16);
  CHECK(g.space_point(0) == 0.0);
  CHECK(g.space_point(1) == 0.5);

  const GridConfig g2 = make_grid(2, {1, 4});
  CHECK(g2.h() == 1.0 / 64.0);
  CHECK(g2.space_points().size() == 4);
  CHECK(g2.space_point(1) == 0.25);
  CHECK(g2.space_point(3) == 0.75);
}

TEST_CASE("make_grid rejects CFL violations and bad n") {
  CHECK_THROWS_AS(make_grid(4, {1, 2}), ConfigError);
  CHECK_THROWS_AS(make_grid(4, {3, 4}), ConfigError);
  CHECK_THROWS_AS(make_grid(4, {0, 4}), ConfigError);
  CHECK_THROWS_AS(make_grid(0, {1, 4}), ConfigError);
  CHECK_NOTHROW(make_grid(4, {49, 100}));
  CHECK_NOTHROW(make_grid_unchecked(4, {3, 4}));
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("1/4") == Rational{1, 4});
  CHECK(parse_rational("2/8") == Rational{1, 4});
  CHECK(parse_rational("0.49") == Rational{49, 100});
  CHECK(parse_rational("1") == Rational{1, 1});
  CHECK_THROWS_AS(parse_rational("x/4"), ConfigError);
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
}

TEST_CASE("project_time") {
  const GridConfig g = make_grid(1, {1, 4});  // h = 1/16
  CHECK(project_time(g, 0.20) == 0.1875);
  CHECK(project_time(g, 0.25) == 0.25);
  CHECK(project_time(g, 0.0) == 0.0);
  CHECK(project_time(g, 1.0) == 1.0);
  CHECK_THROWS_AS(project_time(g, -0.1), std::domain_error);
  CHECK_THROWS_AS(project_time(g, 1.1), std::domain_error);

  // idempotent, nonincreasing
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    const double th = project_time(g, t);
    CHECK(th <= t + 1e-15);
    CHECK(project_time(g, th) == th);
  }
}

TEST_CASE("project_space wraps the torus") {
  const GridConfig g = make_grid(2, {1, 4});
  CHECK(project_space(g, 0.30) == 0.25);
  CHECK(project_space(g, 1.0) == 0.0);
  CHECK(project_space(g, -0.1) == 0.75);
  // gridpoints are fixed, projection idempotent
  for (int j = 0; j < g.num_space(); ++j) {
    CHECK(project_space(g, g.space_point(j)) == g.space_point(j));
  }
}

TEST_CASE("nesting_factor") {
  const Rational c{1, 4};
  CHECK(nesting_factor(make_grid(4, c), make_grid(16, c)) == 2);
  CHECK(nesting_factor(make_grid(4, c), make_grid(4, c)) == 0);
  CHECK(!nesting_factor(make_grid(4, c), make_grid(12, c)).has_value());
  CHECK(!nesting_factor(make_grid(4, c), make_grid(2, c)).has_value());
  CHECK_THROWS_AS(nesting_factor(make_grid(4, {1, 4}), make_grid(8, {1, 8})), ConfigError);
}

TEST_CASE("refinement nests gridpoints and divides steps") {
  const Rational c{1, 4};
  for (const int n : {1, 2, 4, 8}) {
    const GridConfig coarse = make_grid(n, c);
    const GridConfig fine = make_grid(2 * n, c);
    CHECK(fine.h() == coarse.h() / 4.0);
    CHECK(fine.num_space() == 2 * coarse.num_space());
    // every coarse gridpoint is a fine gridpoint
    for (int j = 0; j < coarse.num_space(); ++j) {
      CHECK(project_space(fine, coarse.space_point(j)) == coarse.space_point(j));
    }
    for (std::int64_t i = 0; i <= coarse.num_time(); i += 7) {
      const double t = coarse.time_point(i);
      CHECK(project_time(fine, t) == t);
    }
  }
}
