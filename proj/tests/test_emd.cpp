#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anon/emd.hpp"
#include "paper_tables.hpp"

#include <random>

using namespace anon;

namespace {

DistributionVector random_distribution(std::mt19937& rng, std::size_t dim) {
  std::uniform_int_distribution<long long> d(0, 20);
  std::vector<long long> w(dim, 0);
  long long total = 0;
  while (total == 0) {
    for (std::size_t i = 0; i < dim; ++i) {
      w[i] = d(rng);
      total += w[i];
    }
  }
  DistributionVector out;
  for (long long v : w) out.mass.push_back(Rational(v, total));
  return out;
}

}  // namespace

TEST_CASE("space validation enforces all four axioms") {
  CHECK(validate_space(equal_distance_space(3)));
  CHECK(validate_space(four_point_space()));

  SaSpace half = equal_distance_space(3);
  for (auto& row : half.dist) {
    for (auto& v : row) v /= 2;
  }
  CHECK_FALSE(validate_space(half));  // max distance must be exactly 1

  SaSpace asym = equal_distance_space(3);
  asym.dist[0][1] = Rational(1, 2);
  CHECK_FALSE(validate_space(asym));

  SaSpace diag = equal_distance_space(3);
  diag.dist[1][1] = 1;
  CHECK_FALSE(validate_space(diag));

  // Triangle violation: d(0,2)=1 but d(0,1)+d(1,2)=1/2.
  SaSpace tri = equal_distance_space(3);
  tri.dist[0][1] = tri.dist[1][0] = Rational(1, 4);
  tri.dist[1][2] = tri.dist[2][1] = Rational(1, 4);
  CHECK_FALSE(validate_space(tri));

  SaSpace big = equal_distance_space(3);
  big.dist[0][1] = big.dist[1][0] = 2;
  CHECK_FALSE(validate_space(big));
}

TEST_CASE("distributions of the worked examples") {
  Table t = fixtures::micro_table();
  SaSpace space = equal_distance_space(t.sa_values());
  Group all{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
  DistributionVector p = distribution(t, all, space);
  CHECK(p.mass == std::vector<Rational>{Rational(3, 10), Rational(3, 10),
                                        Rational(4, 10)});

  // First group of the 2-diverse partition: one viral infection, one heart
  // disease.
  DistributionVector g = distribution(t, {{0, 1}}, space);
  CHECK(g.mass == std::vector<Rational>{Rational(1, 2), Rational(1, 2), 0});

  DistributionVector single = distribution(t, {{3}}, space);
  CHECK(single.mass == std::vector<Rational>{0, 0, 1});

  SaSpace wrong = equal_distance_space({"a", "b"});
  CHECK_THROWS_WITH_AS(distribution(t, {{0}}, wrong),
                       "unknown SA value: Viral Infection",
                       std::invalid_argument);
}

TEST_CASE("equal-distance closed form") {
  DistributionVector x{{Rational(1, 2), Rational(1, 2), 0}};
  DistributionVector y{{Rational(3, 10), Rational(3, 10), Rational(4, 10)}};
  CHECK(emd_equal_distance(x, y) == Rational(2, 5));
  CHECK(emd_equal_distance(x, x) == 0);

  // Size-1 group against the uniform distribution over 4 values: 1 - 1/4.
  DistributionVector u{{Rational(1, 4), Rational(1, 4), Rational(1, 4),
                        Rational(1, 4)}};
  DistributionVector ind{{1, 0, 0, 0}};
  CHECK(emd_equal_distance(ind, u) == Rational(3, 4));

  CHECK_THROWS_AS(emd_equal_distance(x, u), std::invalid_argument);
}

TEST_CASE("general transportation solver on the four-point metric") {
  SaSpace space = four_point_space();
  for (const Rational& t : {Rational(1, 3), Rational(2, 5), Rational(5, 12)}) {
    Rational third = (1 - 2 * t) / 3;
    DistributionVector y{{third, third, third, 2 * t}};
    DistributionVector x{{Rational(1, 3), Rational(1, 3), Rational(1, 3), 0}};
    CHECK(emd_general(x, y, space) == t);
    DistributionVector z{{0, 0, 0, 1}};
    CHECK(emd_general(z, y, space) == (1 - 2 * t) / 2);
  }
}

TEST_CASE("four-point closed form") {
  DistributionVector a{{Rational(1, 3), Rational(1, 3), Rational(1, 3), 0}};
  Rational t(1, 3);
  Rational third = (1 - 2 * t) / 3;
  DistributionVector b{{third, third, third, 2 * t}};
  CHECK(emd_four_point(a, b) == t);  // swapped internally so a4 >= b4
  CHECK(emd_four_point(a, a) == 0);

  DistributionVector e1{{1, 0, 0, 0}};
  DistributionVector e4{{0, 0, 0, 1}};
  CHECK(emd_four_point(e1, e4) == Rational(1, 2));

  DistributionVector bad{{1, 0, 0}};
  CHECK_THROWS_AS(emd_four_point(bad, bad), std::invalid_argument);
}

TEST_CASE("closed forms agree with the LP solver on random inputs") {
  std::mt19937 rng(123);
  for (int it = 0; it < 300; ++it) {
    std::size_t dim = 2 + static_cast<std::size_t>(rng() % 5);
    SaSpace space = equal_distance_space(dim);
    DistributionVector x = random_distribution(rng, dim);
    DistributionVector y = random_distribution(rng, dim);
    Rational lp = emd_general(x, y, space);
    CHECK(lp == emd_equal_distance(x, y));
    CHECK(lp == emd_general(y, x, space));  // symmetry
    CHECK(lp >= 0);
    CHECK(lp <= 1);
  }
  SaSpace fp = four_point_space();
  for (int it = 0; it < 300; ++it) {
    DistributionVector a = random_distribution(rng, 4);
    DistributionVector b = random_distribution(rng, 4);
    CHECK(emd_four_point(a, b) == emd_general(a, b, fp));
  }
}

TEST_CASE("closeness checks on the worked partitions") {
  Table t = fixtures::micro_table();
  SaSpace space = equal_distance_space(t.sa_values());
  for (const Group& g : fixtures::close_partition().groups) {
    CHECK(check_closeness(t, g, Rational(1, 10), space));
  }
  CHECK_FALSE(check_closeness(t, fixtures::diverse2_partition().groups[0],
                              Rational(3, 10), space));
  Group all{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
  CHECK(check_closeness(t, all, 0, space));
  CHECK_THROWS_AS(check_closeness(t, all, Rational(3, 2), space),
                  std::invalid_argument);
}

TEST_CASE("space files parse and round-trip") {
  SaSpace eq = parse_space("equal 3\n");
  CHECK(eq.size() == 3);
  CHECK(eq.dist[0][1] == 1);
  CHECK(eq.sa_values[2] == "3");

  SaSpace fp = four_point_space();
  SaSpace back = parse_space(space_to_text(fp));
  CHECK(back.sa_values == fp.sa_values);
  CHECK(back.dist == fp.dist);

  CHECK_THROWS_AS(parse_space(""), std::invalid_argument);
  // Matrix with max distance 1/2 violates the normalized condition.
  CHECK_THROWS_AS(parse_space("2\na b\n0 1/2\n1/2 0\n"), std::invalid_argument);
}

TEST_CASE("distribution literals") {
  DistributionVector d = parse_distribution("1/2,1/2,0");
  CHECK(d.mass == std::vector<Rational>{Rational(1, 2), Rational(1, 2), 0});
  CHECK(parse_distribution("0.3,0.3,0.4").mass[2] == Rational(2, 5));
  CHECK_THROWS_AS(parse_distribution("1/2,1/3"), std::invalid_argument);
}
