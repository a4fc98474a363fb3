#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "icrys/crystal.hpp"

namespace icrys {

// A word (i_1, ..., i_r) of 0-based node indices, denoting the element
// f_{i_r} ... f_{i_1} applied to the highest element (of B(infinity) or of a
// highest-weight crystal, depending on context).
using BWord = std::vector<int>;

struct BInftyStats {
  Weight wt;
  std::vector<long long> eps;
  std::vector<long long> phi;
  bool operator==(const BInftyStats&) const = default;
};

// ---------------------------------------------------------------------------
// BLambda: a realization of the highest-weight crystal B(lambda) for the
// bundled datum shapes, lazily walkable (so stabilization ambients with huge
// element counts never get materialized) and materializable on demand.
//
// Realizations: rank-1 data and rank-2 data with a_{12} = 0 use explicit
// string products; rank-2 chains with a_{12} = a_{21} = -1 use the
// highest-weight component of a lazy power of the three-letter crystal.
// ---------------------------------------------------------------------------
class BLambda {
 public:
  using State = std::vector<int>;  // realization-internal handle

  BLambda(const CartanSatakeDatum& datum, const Weight& lambda);

  const CartanSatakeDatum& datum() const { return datum_; }
  const Weight& lambda() const { return lambda_; }

  State highest() const;
  std::optional<State> apply_e(const State& x, int i) const;
  std::optional<State> apply_f(const State& x, int i) const;
  long long eps(const State& x, int i) const;
  long long phi(const State& x, int i) const;
  Weight wt(const State& x) const;
  std::string name(const State& x) const;

  // pi_lambda of a word: walk the f-steps from the highest element.
  std::optional<State> eval_word(const BWord& word) const;

  // Materialized graph (breadth-first from the highest element) and the
  // index of a state within it.  Both are memoized.
  const CrystalGraph& graph(long long cap = 200000) const;
  int index_of(const State& x) const;

 private:
  CartanSatakeDatum datum_;
  Weight lambda_;
  // exactly one of the two realizations is active
  std::shared_ptr<CrystalGraph> explicit_graph_;
  std::shared_ptr<TensorPowerCrystal> lazy_power_;
  State lazy_seed_;
  // memoized materialization
  mutable std::shared_ptr<CrystalGraph> graph_;
  mutable std::shared_ptr<std::map<std::string, int>> graph_index_;
};

// Stable statistics of a word, computed in B(N rho) with
// N = (1 + A_max) * (len + 1) and verified by re-evaluation at N + 1.
// extra_n shifts the stabilization bound (the tests use +1/+2).
BInftyStats binfty_stats(const CartanSatakeDatum& datum, const BWord& word, long long extra_n = 0);

// Membership of the word's element in B(infinity; lambda): true iff the walk
// survives in B(lambda).
bool in_binfty_lambda(const CartanSatakeDatum& datum, const BWord& word, const Weight& lambda);

// Semantic equality of two words (same element of B(infinity)), decided by
// evaluation at a common stabilization weight and re-checked one step higher.
bool binfty_equal(const CartanSatakeDatum& datum, const BWord& w1, const BWord& w2);

// pi_lambda(word) as an index into realization.graph(), for words lying in
// B(infinity; mu); nullopt otherwise.  Requires <h_i, mu> <= <h_i, lambda>.
std::optional<int> b_lambda_mu_member(BLambda& realization, const BWord& word, const Weight& mu);

// Breadth-first covering words: for each element of realization.graph(), one
// f-word reaching it from the highest element.
std::vector<BWord> covering_words(const BLambda& realization);

// JSON (de)serialization of words as arrays of 1-based node labels.
std::string bword_to_json_text(const BWord& word);
BWord bword_from_json_text(const CartanSatakeDatum& datum, const std::string& text);

}  // namespace icrys
