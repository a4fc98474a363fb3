#include "icrys/binfty.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace icrys {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

bool is_rank2_orthogonal(const CartanSatakeDatum& d) {
  return d.rank == 2 && d.gcm[0][1] == 0 && d.gcm[1][0] == 0;
}

bool is_rank2_chain(const CartanSatakeDatum& d) {
  return d.rank == 2 && d.gcm[0][1] == -1 && d.gcm[1][0] == -1 && d.d[0] == 1 && d.d[1] == 1;
}

long long max_offdiag(const CartanSatakeDatum& d) {
  long long m = 0;
  for (int i = 0; i < d.rank; ++i)
    for (int j = 0; j < d.rank; ++j)
      if (i != j) m = std::max(m, static_cast<long long>(std::abs(d.gcm[i][j])));
  return m;
}

}  // namespace

BLambda::BLambda(const CartanSatakeDatum& datum, const Weight& lambda)
    : datum_(datum), lambda_(lambda) {
  if (static_cast<int>(lambda.size()) != datum.rank) fail("BLambda: lambda arity mismatch");
  if (!weight_dominant(lambda)) fail("BLambda: lambda must be dominant");
  const bool zero = std::all_of(lambda.begin(), lambda.end(), [](long long c) { return c == 0; });
  if (datum.rank == 1) {
    explicit_graph_ = std::make_shared<CrystalGraph>(
        make_crystal(datum, "node_string", {1, lambda[0]}));
  } else if (zero) {
    explicit_graph_ = std::make_shared<CrystalGraph>(make_crystal(datum, "node_string", {1, 0}));
  } else if (is_rank2_orthogonal(datum_)) {
    explicit_graph_ = std::make_shared<CrystalGraph>(
        tensor_crystals(make_crystal(datum, "node_string", {1, lambda[0]}),
                        make_crystal(datum, "node_string", {2, lambda[1]})));
  } else if (is_rank2_chain(datum_)) {
    const CrystalGraph nat = make_crystal(datum, "natural_A", {});
    const int copies = static_cast<int>(lambda[0] + 2 * lambda[1]);
    lazy_power_ = std::make_shared<TensorPowerCrystal>(nat, copies);
    // Highest-weight word: lambda[1] blocks (b_0, b_-1) followed by lambda[0]
    // letters b_-1; each block is a highest word of the corresponding
    // fundamental weight, and concatenations of highest words stay highest.
    for (long long k = 0; k < lambda[1]; ++k) {
      lazy_seed_.push_back(1);
      lazy_seed_.push_back(0);
    }
    for (long long k = 0; k < lambda[0]; ++k) lazy_seed_.push_back(0);
    for (int i = 0; i < 2; ++i) {
      if (lazy_power_->eps(lazy_seed_, i) != 0) fail("BLambda: seed not highest weight");
    }
  } else {
    fail("BLambda: unsupported datum shape (need rank 1, an orthogonal rank-2 pair, or a rank-2 chain)");
  }
}

BLambda::State BLambda::highest() const {
  if (explicit_graph_) return {0};
  return lazy_seed_;
}

std::optional<BLambda::State> BLambda::apply_e(const State& x, int i) const {
  if (explicit_graph_) {
    const int y = explicit_graph_->e[x[0]][i];
    if (y < 0) return std::nullopt;
    return State{y};
  }
  return lazy_power_->apply_e(x, i);
}

std::optional<BLambda::State> BLambda::apply_f(const State& x, int i) const {
  if (explicit_graph_) {
    const int y = explicit_graph_->f[x[0]][i];
    if (y < 0) return std::nullopt;
    return State{y};
  }
  return lazy_power_->apply_f(x, i);
}

long long BLambda::eps(const State& x, int i) const {
  if (explicit_graph_) return explicit_graph_->eps[x[0]][i].get();
  return lazy_power_->eps(x, i);
}

long long BLambda::phi(const State& x, int i) const {
  if (explicit_graph_) return explicit_graph_->phi[x[0]][i].get();
  return lazy_power_->phi(x, i);
}

Weight BLambda::wt(const State& x) const {
  if (explicit_graph_) return explicit_graph_->wt[x[0]];
  return lazy_power_->wt(x);
}

std::string BLambda::name(const State& x) const {
  if (explicit_graph_) return explicit_graph_->names[x[0]];
  return lazy_power_->name(x);
}

std::optional<BLambda::State> BLambda::eval_word(const BWord& word) const {
  State x = highest();
  for (int i : word) {
    if (i < 0 || i >= datum_.rank) fail("eval_word: node index out of range");
    std::optional<State> y = apply_f(x, i);
    if (!y) return std::nullopt;
    x = *y;
  }
  return x;
}

const CrystalGraph& BLambda::graph(long long cap) const {
  if (!graph_) {
    if (explicit_graph_) {
      graph_ = explicit_graph_;
    } else {
      graph_ = std::make_shared<CrystalGraph>(
          highest_weight_component(*lazy_power_, lazy_seed_, cap));
    }
    graph_index_ = std::make_shared<std::map<std::string, int>>();
    for (int k = 0; k < graph_->size(); ++k) graph_index_->emplace(graph_->names[k], k);
  }
  return *graph_;
}

int BLambda::index_of(const State& x) const {
  graph();
  auto it = graph_index_->find(name(x));
  if (it == graph_index_->end()) fail("index_of: state not in the materialized component");
  return it->second;
}

BInftyStats binfty_stats(const CartanSatakeDatum& datum, const BWord& word, long long extra_n) {
  const long long len = static_cast<long long>(word.size());
  const long long n_base = (1 + max_offdiag(datum)) * (len + 1) + extra_n;
  std::optional<BInftyStats> previous;
  for (long long n : {n_base, n_base + 1}) {
    const Weight rho_n(static_cast<size_t>(datum.rank), n);
    BLambda ambient(datum, rho_n);
    std::optional<BLambda::State> x = ambient.eval_word(word);
    if (!x) fail("binfty_stats: evaluation died at the stabilization weight (bound too small)");
    BInftyStats st;
    st.wt = weight_sub(ambient.wt(*x), rho_n);
    for (int i = 0; i < datum.rank; ++i) {
      st.eps.push_back(ambient.eps(*x, i));
      st.phi.push_back(ambient.phi(*x, i) - n);
    }
    if (previous && !(st == *previous))
      fail("binfty_stats: evaluations at consecutive stabilization weights disagree");
    previous = st;
  }
  return *previous;
}

bool in_binfty_lambda(const CartanSatakeDatum& datum, const BWord& word, const Weight& lambda) {
  BLambda ambient(datum, lambda);
  return ambient.eval_word(word).has_value();
}

bool binfty_equal(const CartanSatakeDatum& datum, const BWord& w1, const BWord& w2) {
  const long long len = static_cast<long long>(std::max(w1.size(), w2.size()));
  const long long n_base = (1 + max_offdiag(datum)) * (len + 1);
  std::optional<bool> previous;
  for (long long n : {n_base, n_base + 1}) {
    const Weight rho_n(static_cast<size_t>(datum.rank), n);
    BLambda ambient(datum, rho_n);
    std::optional<BLambda::State> x1 = ambient.eval_word(w1);
    std::optional<BLambda::State> x2 = ambient.eval_word(w2);
    if (!x1 || !x2) fail("binfty_equal: evaluation died at the stabilization weight");
    const bool equal = *x1 == *x2;
    if (previous && equal != *previous)
      fail("binfty_equal: verdicts at consecutive stabilization weights disagree");
    previous = equal;
  }
  return *previous;
}

std::optional<int> b_lambda_mu_member(BLambda& realization, const BWord& word, const Weight& mu) {
  const CartanSatakeDatum& datum = realization.datum();
  if (static_cast<int>(mu.size()) != datum.rank) fail("b_lambda_mu_member: mu arity mismatch");
  if (!weight_dominant(mu)) fail("b_lambda_mu_member: mu must be dominant");
  for (int i = 0; i < datum.rank; ++i) {
    if (mu[i] > realization.lambda()[i])
      fail("b_lambda_mu_member: requires <h_i, mu> <= <h_i, lambda> for all i");
  }
  if (!in_binfty_lambda(datum, word, mu)) return std::nullopt;
  std::optional<BLambda::State> x = realization.eval_word(word);
  if (!x) fail("b_lambda_mu_member: word in B(infinity; mu) died in B(lambda)");
  return realization.index_of(*x);
}

std::vector<BWord> covering_words(const BLambda& realization) {
  const CrystalGraph& g = realization.graph();
  std::vector<BWord> words(g.size());
  std::vector<char> seen(g.size(), 0);
  // breadth-first over f-edges only, starting at the highest element
  std::vector<int> queue{0};
  seen[0] = 1;
  for (size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (int i = 0; i < g.datum.rank; ++i) {
      const int y = g.f[x][i];
      if (y >= 0 && !seen[y]) {
        seen[y] = 1;
        words[y] = words[x];
        words[y].push_back(i);
        queue.push_back(y);
      }
    }
  }
  for (int x = 0; x < g.size(); ++x) {
    if (!seen[x]) fail("covering_words: element not reachable by f-steps from the top");
  }
  return words;
}

std::string bword_to_json_text(const BWord& word) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (int i : word) j.push_back(i + 1);
  return j.dump();
}

BWord bword_from_json_text(const CartanSatakeDatum& datum, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(std::string("word JSON: parse error: ") + e.what());
  }
  if (!j.is_array()) fail("word JSON: expected an array of node labels");
  BWord out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail("word JSON: labels must be integers");
    const long long i1 = v.get<long long>();
    if (i1 < 1 || i1 > datum.rank) fail("word JSON: node label out of range");
    out.push_back(static_cast<int>(i1 - 1));
  }
  return out;
}

}  // namespace icrys
