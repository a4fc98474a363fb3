// Tests for Cartan/involution datum validation, weights, and the projection
// onto the involution-quotient weight lattice.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "icrys/rootdata.hpp"
#include "json.hpp"

using namespace icrys;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CartanSatakeDatum a1() { return validate_datum({{2}}, {1}, {1}, {1}); }

CartanSatakeDatum a1xa1() {
  return validate_datum({{2, 0}, {0, 2}}, {1, 1}, {2, 1}, {0, 0});
}

CartanSatakeDatum a2flip() {
  return validate_datum({{2, -1}, {-1, 2}}, {1, 1}, {2, 1}, {1, 0});
}

}  // namespace

TEST_CASE("datum validation accepts the three bundled shapes") {
  CHECK(a1().rank == 1);
  CHECK(a1().a_itau(0) == 2);
  CHECK(a1().i_tau == std::vector<int>{0});

  const CartanSatakeDatum d2 = a1xa1();
  CHECK(d2.a_itau(0) == 0);
  CHECK(d2.tau == std::vector<int>{1, 0});
  CHECK(d2.i_tau == std::vector<int>{0});
  CHECK(d2.orbit_of(0) == 0);
  CHECK(d2.orbit_of(1) == 0);
  CHECK(d2.is_rep(0));
  CHECK_FALSE(d2.is_rep(1));

  const CartanSatakeDatum d3 = a2flip();
  CHECK(d3.a_itau(0) == -1);
  CHECK(d3.s == std::vector<long long>{1, 0});
  CHECK(d3.num_orbits() == 1);
}

TEST_CASE("datum validation rejects bad input with the documented messages") {
  // identity involution on the A2 matrix forces s_i + s_{tau(i)} = 1 to fail
  CHECK_THROWS_WITH_AS(validate_datum({{2, -1}, {-1, 2}}, {1, 1}, {2, 1}, {1, 1}),
                       doctest::Contains("s_i + s_{τ(i)} ≠ 1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(validate_datum({{2, -1}, {-1, 1}}, {1, 1}, {1, 2}, {0, 0}),
                       doctest::Contains("a_{i,i} ≠ 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(validate_datum({{2, 1}, {1, 2}}, {1, 1}, {1, 2}, {0, 0}),
                       doctest::Contains("a_{i,j} > 0"), std::runtime_error);
  CHECK_THROWS_WITH_AS(validate_datum({{2, -2}, {-1, 2}}, {1, 1}, {1, 2}, {0, 0}),
                       doctest::Contains("d_i a_{i,j} ≠ d_j a_{j,i}"), std::runtime_error);
  // B2 matrix is symmetrizable with d = (2, 1)
  CHECK_NOTHROW(validate_datum({{2, -1}, {-2, 2}}, {2, 1}, {1, 2}, {1, 1}));
  // tau must commute with the matrix: swap on B2 does not
  CHECK_THROWS_WITH_AS(validate_datum({{2, -1}, {-2, 2}}, {2, 1}, {2, 1}, {0, 0}),
                       doctest::Contains("a_{τ(i),τ(j)} ≠ a_{i,j}"), std::runtime_error);
  // swap on the doubled-edge rank-2 matrix commutes but has a_{i,tau(i)} = -2
  CHECK_THROWS_WITH_AS(validate_datum({{2, -2}, {-2, 2}}, {1, 1}, {2, 1}, {0, 0}),
                       doctest::Contains("a_{i,τ(i)} ∉ {2, 0, -1}"), std::runtime_error);
  // a = 0 orbits must carry s = 0
  CHECK_THROWS_WITH_AS(validate_datum({{2, 0}, {0, 2}}, {1, 1}, {2, 1}, {1, 0}),
                       doctest::Contains("s_i ≠ 0 with a_{i,τ(i)} = 0"), std::runtime_error);
  // non-involutive tau
  CHECK_THROWS_WITH_AS(
      validate_datum({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}, {1, 1, 1}, {2, 3, 1}, {0, 0, 0}),
      doctest::Contains("τ² ≠ id"), std::runtime_error);
  // bad explicit representative sets
  CHECK_THROWS_WITH_AS(validate_datum({{2, 0}, {0, 2}}, {1, 1}, {2, 1}, {0, 0}, {1, 2}),
                       doctest::Contains("i_tau"), std::runtime_error);
  CHECK_NOTHROW(validate_datum({{2, 0}, {0, 2}}, {1, 1}, {2, 1}, {0, 0}, {2}));
}

TEST_CASE("datum JSON round trip") {
  for (const char* name : {"a1.json", "a1xa1.json", "a2flip.json"}) {
    const std::string path = std::string(ICRYS_DATA_DIR) + "/" + name;
    const CartanSatakeDatum d = datum_from_json_text(slurp(path));
    const std::string text = datum_to_json_text(d);
    const CartanSatakeDatum d2 = datum_from_json_text(text);
    CHECK(d == d2);
    CHECK(datum_to_json_text(d2) == text);  // normalized form is stable
  }
  CHECK_THROWS(datum_from_json_text("{"));
  CHECK_THROWS(datum_from_json_text("{\"gcm\": [[2]], \"d\": [1], \"tau\": [1]}"));
  CHECK_THROWS(datum_from_json_text("[]"));
}

TEST_CASE("weights: arithmetic and simple roots") {
  const CartanSatakeDatum d3 = a2flip();
  const Weight a1w = alpha_weight(d3, 0);
  const Weight a2w = alpha_weight(d3, 1);
  CHECK(a1w == Weight{2, -1});
  CHECK(a2w == Weight{-1, 2});
  CHECK(weight_add(a1w, a2w) == Weight{1, 1});
  CHECK(weight_sub(a1w, a1w) == weight_zero(d3));
  CHECK(weight_neg(a1w) == Weight{-2, 1});
  CHECK(weight_dominant(Weight{0, 3}));
  CHECK_FALSE(weight_dominant(Weight{1, -1}));
  CHECK(tau_weight(d3, Weight{5, 7}) == Weight{7, 5});
  CHECK(weight_str(Weight{1, -2}) == "(1,-2)");
}

TEST_CASE("weight projection: pinned values") {
  // one fixed node: (4) projects to parity 0, (3) to parity 1
  const CartanSatakeDatum d1 = a1();
  CHECK(project_weight(Weight{4}, d1) == IWeight{{0}});
  CHECK(project_weight(Weight{3}, d1) == IWeight{{1}});
  CHECK(project_weight(Weight{-3}, d1) == IWeight{{1}});
  // swap orbit: (3,1) projects to <h_1 - h_2, .> = 2
  const CartanSatakeDatum d2 = a1xa1();
  CHECK(project_weight(Weight{3, 1}, d2) == IWeight{{2}});
  CHECK(project_weight(Weight{1, 3}, d2) == IWeight{{-2}});
}

TEST_CASE("weight projection: kernel and homomorphism properties") {
  std::mt19937 rng(777);
  std::uniform_int_distribution<long long> c(-6, 6);
  for (const CartanSatakeDatum& d : {a1(), a1xa1(), a2flip()}) {
    for (int trial = 0; trial < 200; ++trial) {
      Weight x(d.rank), y(d.rank);
      for (int i = 0; i < d.rank; ++i) {
        x[i] = c(rng);
        y[i] = c(rng);
      }
      // homomorphism
      CHECK(project_weight(weight_add(x, y), d) ==
            iweight_add(project_weight(x, d), project_weight(y, d), d));
      CHECK(project_weight(weight_sub(x, y), d) ==
            iweight_sub(project_weight(x, d), project_weight(y, d), d));
      // kernel contains lambda + tau(lambda)
      const Weight k = weight_add(x, tau_weight(d, x));
      CHECK(project_weight(k, d) == iweight_zero(d));
    }
  }
}

TEST_CASE("iweight coordinate accessors") {
  const CartanSatakeDatum d1 = a1();
  const IWeight p1 = project_weight(Weight{5}, d1);
  CHECK(iweight_parity(p1, 0, d1) == 1);
  CHECK_THROWS(iweight_signed(p1, 0, d1));

  const CartanSatakeDatum d2 = a1xa1();
  const IWeight p2 = project_weight(Weight{3, 1}, d2);
  CHECK(iweight_signed(p2, 0, d2) == 2);
  CHECK(iweight_signed(p2, 1, d2) == -2);
  CHECK_THROWS(iweight_parity(p2, 0, d2));

  const CartanSatakeDatum d3 = a2flip();
  CHECK(ibar_alpha(d3, 0) == IWeight{{3}});
  CHECK(ibar_alpha(d3, 1) == IWeight{{-3}});
  CHECK(ibar_alpha(d2, 0) == IWeight{{2}});
  CHECK(ibar_alpha(d2, 1) == IWeight{{-2}});
  CHECK(ibar_alpha(d1, 0) == IWeight{{0}});
  CHECK(iweight_str(p2) == "(2)");
}
