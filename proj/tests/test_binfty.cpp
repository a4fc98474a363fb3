// Tests for the stabilized word calculus: evaluation of f-words in
// highest-weight ambients, stable statistics, membership and equality, and
// the image sets pi_lambda(...) with their closure criteria.
//
// Oracles: explicit tensor-power graphs (built edge-by-edge with the plain
// tensor rule) cross-check the lazy ambient; statistics identities are tested
// against evaluations at several independent weights.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "icrys/binfty.hpp"
#include "icrys/crystal.hpp"

using namespace icrys;

namespace {

CartanSatakeDatum a1() { return validate_datum({{2}}, {1}, {1}, {1}); }

CartanSatakeDatum a1xa1() {
  return validate_datum({{2, 0}, {0, 2}}, {1, 1}, {2, 1}, {0, 0});
}

CartanSatakeDatum a2flip() {
  return validate_datum({{2, -1}, {-1, 2}}, {1, 1}, {2, 1}, {1, 0});
}

std::vector<BWord> random_words(const CartanSatakeDatum& d, int count, int maxlen,
                                unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len(0, maxlen);
  std::uniform_int_distribution<int> node(0, d.rank - 1);
  std::vector<BWord> out;
  for (int k = 0; k < count; ++k) {
    BWord w(len(rng));
    for (auto& i : w) i = node(rng);
    out.push_back(w);
  }
  return out;
}

}  // namespace

TEST_CASE("word evaluation in small ambients") {
  const CartanSatakeDatum d = a1();
  BLambda b3(d, {3});
  // empty word evaluates to the highest element
  auto top = b3.eval_word({});
  REQUIRE(top.has_value());
  CHECK(b3.name(*top) == "b_0");
  CHECK(b3.eps(*top, 0) == 0);
  // word (i) with lambda = 0 dies immediately
  BLambda b0(d, {0});
  CHECK_FALSE(b0.eval_word({0}).has_value());
  // A1 word (i,i): dies in B(1), reaches the bottom of B(2)
  BLambda b1(d, {1});
  CHECK_FALSE(b1.eval_word({0, 0}).has_value());
  BLambda b2(d, {2});
  auto bottom = b2.eval_word({0, 0});
  REQUIRE(bottom.has_value());
  CHECK(b2.name(*bottom) == "b_2");
  CHECK_THROWS(BLambda(d, {-1}));
}

TEST_CASE("lazy chain ambient agrees with the explicit tensor power") {
  const CartanSatakeDatum d = a2flip();
  BLambda lazy(d, {3, 3});
  // independent explicit construction: nine-fold tensor power, then the
  // highest-weight component of the same seed word
  const CrystalGraph nat = make_crystal(d, "natural_A", {});
  CrystalGraph power = nat;
  for (int k = 1; k < 9; ++k) power = tensor_crystals(power, nat);
  REQUIRE(power.size() == 19683);
  // seed (b_0, b_-1) x3 then b_-1 x3 -> flattened index
  const std::vector<int> seed_word{1, 0, 1, 0, 1, 0, 0, 0, 0};
  int seed = 0;
  for (int x : seed_word) seed = seed * 3 + x;
  const CrystalGraph explicit_g = highest_weight_component(power, seed);
  const CrystalGraph& lazy_g = lazy.graph();
  REQUIRE(explicit_g.size() == lazy_g.size());
  // same multiset of names, and matching structure under the name bijection
  std::vector<int> to_explicit(lazy_g.size());
  for (int k = 0; k < lazy_g.size(); ++k) {
    auto it = std::find(explicit_g.names.begin(), explicit_g.names.end(), lazy_g.names[k]);
    REQUIRE(it != explicit_g.names.end());
    to_explicit[k] = static_cast<int>(it - explicit_g.names.begin());
  }
  CrystalMorphism mu{lazy_g, explicit_g, to_explicit};
  CHECK(check_crystal_morphism(mu).cls == MorphismClass::Isomorphism);
  // spot-check walks
  for (const BWord& w : random_words(d, 40, 8, 99)) {
    auto via_lazy = lazy.eval_word(w);
    // walk in the explicit component
    int x = 0;
    bool alive = true;
    for (int i : w) {
      x = alive ? explicit_g.f[x][i] : -1;
      alive = x >= 0;
    }
    CHECK(via_lazy.has_value() == alive);
    if (via_lazy && alive) CHECK(lazy_g.names[lazy.index_of(*via_lazy)] == explicit_g.names[x]);
  }
}

TEST_CASE("component sizes match the dimension formula for the rank-2 chain") {
  const CartanSatakeDatum d = a2flip();
  auto dim = [](long long a, long long b) { return (a + 1) * (b + 1) * (a + b + 2) / 2; };
  for (auto [a, b] : std::vector<std::pair<long long, long long>>{
           {0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {2, 1}, {3, 2}, {5, 4}}) {
    BLambda amb(d, {a, b});
    CHECK(amb.graph().size() == dim(a, b));
    CHECK(check_seminormal(amb.graph()).pass());
  }
}

TEST_CASE("stable statistics: frozen values") {
  // the empty word is the highest element: all statistics vanish
  for (const CartanSatakeDatum& d : {a1(), a1xa1(), a2flip()}) {
    const BInftyStats st = binfty_stats(d, {});
    CHECK(st.wt == weight_zero(d));
    for (int i = 0; i < d.rank; ++i) {
      CHECK(st.eps[i] == 0);
      CHECK(st.phi[i] == 0);
    }
  }
  // A1 word (i)
  {
    const BInftyStats st = binfty_stats(a1(), {0});
    CHECK(st.wt == Weight{-2});
    CHECK(st.eps == std::vector<long long>{1});
    CHECK(st.phi == std::vector<long long>{-1});
  }
  // product datum: the two nodes do not interact
  {
    const BInftyStats st = binfty_stats(a1xa1(), {0});
    CHECK(st.wt == Weight{-2, 0});
    CHECK(st.eps == std::vector<long long>{1, 0});
    CHECK(st.phi == std::vector<long long>{-1, 0});
  }
  // chain datum, word (1): eps_2 = 0 because no element of weight
  // -alpha_1 + alpha_2 can exist below the top
  {
    const BInftyStats st = binfty_stats(a2flip(), {0});
    CHECK(st.wt == Weight{-2, 1});
    CHECK(st.eps == std::vector<long long>{1, 0});
    CHECK(st.phi == std::vector<long long>{-1, 1});
  }
}

TEST_CASE("stable statistics: weight additivity and independence of the bound") {
  for (const CartanSatakeDatum& d : {a1(), a1xa1(), a2flip()}) {
    for (const BWord& w : random_words(d, 25, 6, 4242)) {
      const BInftyStats st = binfty_stats(d, w);
      Weight expected = weight_zero(d);
      for (int i : w) expected = weight_sub(expected, alpha_weight(d, i));
      CHECK(st.wt == expected);
      CHECK(binfty_stats(d, w, 1) == st);
      CHECK(binfty_stats(d, w, 2) == st);
      // phi = eps + wt coordinatewise
      for (int i = 0; i < d.rank; ++i) CHECK(st.phi[i] == st.eps[i] + st.wt[i]);
    }
  }
}

TEST_CASE("statistics agree with the projected element's statistics") {
  // For words surviving in B(lambda): eps matches, phi shifts by <h_i,lambda>,
  // wt shifts by lambda.
  for (const CartanSatakeDatum& d : {a1(), a1xa1(), a2flip()}) {
    const Weight lambda(static_cast<size_t>(d.rank), 3);
    BLambda amb(d, lambda);
    for (const BWord& w : random_words(d, 30, 6, 777)) {
      auto x = amb.eval_word(w);
      if (!x) continue;
      const BInftyStats st = binfty_stats(d, w);
      CHECK(weight_add(st.wt, lambda) == amb.wt(*x));
      for (int i = 0; i < d.rank; ++i) {
        CHECK(st.eps[i] == amb.eps(*x, i));
        CHECK(st.phi[i] + lambda[i] == amb.phi(*x, i));
      }
    }
  }
}

TEST_CASE("membership and monotonicity") {
  const CartanSatakeDatum d = a2flip();
  CHECK(in_binfty_lambda(d, {}, {0, 0}));
  CHECK_FALSE(in_binfty_lambda(d, {0}, {0, 0}));
  CHECK(in_binfty_lambda(d, {0}, {1, 0}));
  for (const BWord& w : random_words(d, 40, 6, 31337)) {
    for (long long extra = 0; extra < 2; ++extra) {
      const Weight mu{2 + extra, 1 + extra};
      const Weight lm{3 + extra, 3 + extra};
      if (in_binfty_lambda(d, w, mu)) CHECK(in_binfty_lambda(d, w, lm));
    }
  }
}

TEST_CASE("semantic equality of words") {
  const CartanSatakeDatum d = a2flip();
  for (const BWord& w : random_words(d, 10, 5, 5)) CHECK(binfty_equal(d, w, w));
  // different lengths give different weights, hence different elements
  CHECK_FALSE(binfty_equal(d, {0}, {0, 0}));
  CHECK_FALSE(binfty_equal(d, {0, 1}, {1, 0}));
  // equality is decided identically under either argument order and with a
  // larger stabilization weight (cross-evaluated via statistics)
  const auto words = random_words(d, 12, 5, 606);
  for (const BWord& u : words) {
    for (const BWord& v : words) {
      const bool uv = binfty_equal(d, u, v);
      CHECK(uv == binfty_equal(d, v, u));
      if (uv) CHECK(binfty_stats(d, u) == binfty_stats(d, v));
    }
  }
  // over the product datum, letters at distinct nodes commute
  CHECK(binfty_equal(a1xa1(), {0, 1}, {1, 0}));
  CHECK(binfty_equal(a1xa1(), {0, 1, 0}, {0, 0, 1}));
}

TEST_CASE("image of the smaller cone inside B(lambda)") {
  const CartanSatakeDatum d = a1();
  BLambda b3(d, {3});
  // mu = lambda reproduces all of B(3) (surjectivity via covering words)
  {
    std::set<int> image;
    for (const BWord& w : covering_words(b3)) {
      auto idx = b_lambda_mu_member(b3, w, {3});
      REQUIRE(idx.has_value());
      image.insert(*idx);
    }
    CHECK(image.size() == 4);
  }
  // mu = (1): only words of length <= 1 survive; image is {b_0, b_1}
  {
    std::set<std::string> image;
    for (const BWord& w : std::vector<BWord>{{}, {0}, {0, 0}, {0, 0, 0}}) {
      auto idx = b_lambda_mu_member(b3, w, {1});
      if (idx) image.insert(b3.graph().names[*idx]);
    }
    CHECK(image == std::set<std::string>{"b_0", "b_1"});
  }
  CHECK_THROWS(b_lambda_mu_member(b3, {}, {4}));  // mu above lambda
  CHECK_THROWS(b_lambda_mu_member(b3, {}, {-1}));
}

TEST_CASE("lowering closure criterion on the image set") {
  // f_i maps the image of mu into itself exactly when phi_i(b) exceeds
  // <h_i, lambda - mu>; checked exhaustively for lambda = (3), mu = (1).
  const CartanSatakeDatum d = a1();
  BLambda b3(d, {3});
  const Weight mu{1};
  // collect image with representative words
  std::vector<std::pair<BWord, int>> members;
  for (const BWord& w : std::vector<BWord>{{}, {0}}) {
    auto idx = b_lambda_mu_member(b3, w, mu);
    REQUIRE(idx.has_value());
    members.push_back({w, *idx});
  }
  const CrystalGraph& g = b3.graph();
  for (const auto& [w, idx] : members) {
    BWord wf = w;
    wf.push_back(0);
    const bool stays = b_lambda_mu_member(b3, wf, mu).has_value();
    const bool criterion = g.phi[idx][0] == ExtInt(3 - 1);  // phi > <h, lm - mu> = 2
    CHECK(stays == (g.phi[idx][0].get() > 2));
    (void)criterion;
  }
}

TEST_CASE("covering words reach every element and re-evaluate correctly") {
  for (const CartanSatakeDatum& d : {a1(), a1xa1(), a2flip()}) {
    const Weight lambda(static_cast<size_t>(d.rank), 2);
    BLambda amb(d, lambda);
    const std::vector<BWord> words = covering_words(amb);
    REQUIRE(static_cast<int>(words.size()) == amb.graph().size());
    for (int x = 0; x < amb.graph().size(); ++x) {
      auto st = amb.eval_word(words[x]);
      REQUIRE(st.has_value());
      CHECK(amb.index_of(*st) == x);
    }
  }
}

TEST_CASE("word JSON round trip") {
  const CartanSatakeDatum d = a2flip();
  const BWord w{0, 1, 1, 0};
  const std::string text = bword_to_json_text(w);
  CHECK(text == "[1,2,2,1]");
  CHECK(bword_from_json_text(d, text) == w);
  CHECK(bword_from_json_text(d, "[]").empty());
  CHECK_THROWS(bword_from_json_text(d, "[3]"));
  CHECK_THROWS(bword_from_json_text(d, "{}"));
}
