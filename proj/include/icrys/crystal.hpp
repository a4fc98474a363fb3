#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icrys/rootdata.hpp"
#include "icrys/scalars.hpp"

namespace icrys {

// ---------------------------------------------------------------------------
// CrystalGraph: a finite crystal with explicit tables.  e/f store the raising
// and lowering operators as partial maps (target index, or -1 for 0).
// ---------------------------------------------------------------------------
struct CrystalGraph {
  CartanSatakeDatum datum;
  std::vector<std::string> names;
  std::vector<Weight> wt;
  std::vector<std::vector<ExtInt>> eps;  // [elem][node]
  std::vector<std::vector<ExtInt>> phi;  // [elem][node]
  std::vector<std::vector<int>> e;       // [elem][node] -> index or -1
  std::vector<std::vector<int>> f;       // [elem][node] -> index or -1

  int size() const { return static_cast<int>(names.size()); }
  long long wt_i(int b, int i) const { return wt[b][i]; }
};

// Built-in families.  Parameter conventions:
//   "B_n_rank1":  params = {n}, n >= 0; requires a rank-1 datum.  The string
//                 crystal b_0 -> ... -> b_n with wt_i(b_k) = n - 2k.
//   "T_lambda":   params = lambda pairing coordinates; the one-element
//                 crystal with eps = phi = -inf.
//   "natural_A":  params empty; requires a type-A chain Cartan matrix; the
//                 one-row crystal on rank+1 letters (for the rank-2 case the
//                 letters are named b_-1, b_0, b_1).
//   "node_string": params = {i (1-based), n}; the string crystal with highest
//                 weight n * varpi_i; requires a_{j,i} = 0 for all j != i.
CrystalGraph make_crystal(const CartanSatakeDatum& datum, const std::string& family,
                          const std::vector<long long>& params);

CrystalGraph tensor_crystals(const CrystalGraph& b1, const CrystalGraph& b2);

// Pair handle <-> flattened row-major index for tensor products.
inline int tensor_index(int i1, int i2, int size2) { return i1 * size2 + i2; }

struct CheckReport {
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
  std::string str() const;
};

CheckReport check_crystal_axioms(const CrystalGraph& b);
CheckReport check_seminormal(const CrystalGraph& b);

// Commutation conditions for one unordered pair {i, j} with
// a_{ij} = a_{ji} in {0, -1} (checked in both orderings), together with the
// four derived consequences that hold whenever the conditions pass.
CheckReport check_S_conditions(const CrystalGraph& b, int i, int j);
// Convenience: run the pair check for every two-element tau-orbit with
// a_{i,tau(i)} != 2.
CheckReport check_S_conditions_all(const CrystalGraph& b);

struct CrystalMorphism {
  CrystalGraph source;
  CrystalGraph target;
  std::vector<int> map;  // source index -> target index, or -1 for 0
};

enum class MorphismClass { NotMorphism, Morphism, Strict, Isomorphism };

struct MorphismClassification {
  MorphismClass cls = MorphismClass::NotMorphism;
  std::string witness;  // first failure blocking the next-higher class
};

std::string morphism_class_str(MorphismClass c);
MorphismClassification check_crystal_morphism(const CrystalMorphism& m);

// Breadth-first closure of a highest-weight seed (all eps_i = 0) under every
// e_i and f_i.  Throws if the seed is not highest weight or the cap is hit.
CrystalGraph highest_weight_component(const CrystalGraph& ambient, int seed,
                                      long long cap = 100000);

// ---------------------------------------------------------------------------
// TensorPowerCrystal: lazy tensor power of a small seminormal crystal.
// Elements are words of factor indices; operators are evaluated on demand so
// that very large ambient crystals never get materialized.
// ---------------------------------------------------------------------------
class TensorPowerCrystal {
 public:
  using Word = std::vector<int>;

  TensorPowerCrystal(CrystalGraph factor, int copies);

  const CrystalGraph& factor() const { return factor_; }
  int copies() const { return copies_; }
  const CartanSatakeDatum& datum() const { return factor_.datum; }

  Weight wt(const Word& w) const;
  long long eps(const Word& w, int i) const;
  long long phi(const Word& w, int i) const;
  std::optional<Word> apply_e(const Word& w, int i) const;
  std::optional<Word> apply_f(const Word& w, int i) const;
  std::string name(const Word& w) const;

 private:
  CrystalGraph factor_;
  int copies_;
};

CrystalGraph highest_weight_component(const TensorPowerCrystal& ambient,
                                      const TensorPowerCrystal::Word& seed,
                                      long long cap = 100000);

// JSON / DOT serialization.  The JSON form is normalized: re-exporting an
// imported graph reproduces the bytes exactly.
std::string crystal_to_json_text(const CrystalGraph& b);
CrystalGraph crystal_from_json_text(const std::string& text);
std::string crystal_to_dot(const CrystalGraph& b);

}  // namespace icrys
