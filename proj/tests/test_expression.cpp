#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "crm/expression.hpp"

using namespace crm;

namespace {

Vector eval(const ParsedMap& m, std::initializer_list<double> args) {
  Vector x(static_cast<Index>(args.size()));
  Index i = 0;
  for (double v : args) x(i++) = v;
  return m.spec.map(x);
}

}  // namespace

TEST_CASE("linear vector map with implicit multiplication") {
  const ParsedMap m = parse_map_expression("f(x,y)=(2x,3y)");
  CHECK(m.variables == std::vector<std::string>{"x", "y"});
  CHECK(m.codomain_dim == 2);
  const Vector y = eval(m, {1.5, -2.0});
  CHECK(y(0) == doctest::Approx(3.0));
  CHECK(y(1) == doctest::Approx(-6.0));
}

TEST_CASE("powers") {
  const ParsedMap m = parse_map_expression("c(t)=(t^3,t^6)");
  CHECK(m.variables == std::vector<std::string>{"t"});
  const Vector y = eval(m, {2.0});
  CHECK(y(0) == doctest::Approx(8.0));
  CHECK(y(1) == doctest::Approx(64.0));
}

TEST_CASE("scalar field without parentheses around the body") {
  const ParsedMap m = parse_map_expression("g(x)=x^2+x");
  CHECK(m.codomain_dim == 1);
  CHECK(eval(m, {-0.5})(0) == doctest::Approx(-0.25));
  CHECK(eval(m, {3.0})(0) == doctest::Approx(12.0));
}

TEST_CASE("exp and arithmetic combinations") {
  const ParsedMap m =
      parse_map_expression("f(x1,x2,x3,x4)=(exp(x3)(x1-x2),0,0,exp(x3)(x4-x2))");
  CHECK(m.codomain_dim == 4);
  const Vector y = eval(m, {1.0, 2.0, 0.5, 4.0});
  const double s = std::exp(0.5);
  CHECK(y(0) == doctest::Approx(-s));
  CHECK(y(1) == 0.0);
  CHECK(y(2) == 0.0);
  CHECK(y(3) == doctest::Approx(2.0 * s));
}

TEST_CASE("unary minus, division, and numeric literals") {
  const ParsedMap m = parse_map_expression("h(u,v)=(-u/2+0.25, 3(u+v))");
  const Vector y = eval(m, {4.0, 1.0});
  CHECK(y(0) == doctest::Approx(-1.75));
  CHECK(y(1) == doctest::Approx(15.0));
}

TEST_CASE("finite-difference Jacobian of a parsed map") {
  const ParsedMap m = parse_map_expression("f(x,y)=(x^2 y, exp(x))");
  CHECK_FALSE(static_cast<bool>(m.spec.jacobian));
  const ChartManifold dom = ChartManifold::euclidean(2);
  const ChartManifold cod = ChartManifold::euclidean(2);
  Vector x(2);
  x << 0.7, -1.3;
  const Matrix j = jacobian_at(m.spec, x, dom, cod).matrix;
  CHECK(j(0, 0) == doctest::Approx(2 * 0.7 * -1.3).epsilon(1e-7));
  CHECK(j(0, 1) == doctest::Approx(0.7 * 0.7).epsilon(1e-7));
  CHECK(j(1, 0) == doctest::Approx(std::exp(0.7)).epsilon(1e-7));
  CHECK(j(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("syntax and semantic errors") {
  CHECK_THROWS_AS(parse_map_expression("f(x)=(y)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_expression("f(x)=sin(x)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_expression("f(x)=x^"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_expression("f(x)=(x,)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_expression("(2x,3y)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_expression("f(x)=x)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_expression("f(x,x)=x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_map_expression(""), std::invalid_argument);
}
