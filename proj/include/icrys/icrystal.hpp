#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "icrys/crystal.hpp"
#include "icrys/rootdata.hpp"
#include "icrys/scalars.hpp"

namespace icrys {

// ---------------------------------------------------------------------------
// ICrystalGraph: a finite set with
//   * wti       : element -> IWeight,
//   * beta      : element x node -> Z or a -inf symbol,
//   * btil      : per node, a linear operator on the span of the elements,
//                 stored as sparse rows of (target, amplitude) with exact
//                 Sqrt2Scalar amplitudes,
// where the elements form an orthonormal basis for the implicit inner
// product.  Rows keep their entries sorted by target index.
// ---------------------------------------------------------------------------
struct ICrystalGraph {
  CartanSatakeDatum datum;
  std::vector<std::string> names;
  std::vector<IWeight> wti;
  std::vector<std::vector<IExtInt>> beta;  // [element][node]
  // btil[i][src] = { (dst, amplitude), ... }, amplitude nonzero
  std::vector<std::vector<std::vector<std::pair<int, Sqrt2Scalar>>>> btil;

  int size() const { return static_cast<int>(names.size()); }
  // inner product (Btil_i b_src, b_dst)
  Sqrt2Scalar amp(int i, int src, int dst) const;
  // Btil_i b_src as a dense vector
  std::vector<Sqrt2Scalar> apply(int i, int src) const;
  // if Btil_i b_src is exactly one element with amplitude one, its index,
  // else -1
  int image_if_basis(int i, int src) const;
  // signed value <h_i - h_{tau(i)}, wti(b)> at a split node
  long long wti_signed(int elem, int i) const;
  // parity value at a fixed node
  int wti_parity(int elem, int i) const;
};

// Families:
//   "trivial"   : one element over any datum, the structure on B(0)
//   "t_zeta"    : one element of weight zeta, all operators zero; params
//                 zeta_1..zeta_m (one per tau-orbit, default 0)
//   "bi_rank1"  : rank 1; param n (any integer); loop amplitude sgn(n)
//   "bi_pair"   : rank 1; param n > 0; the two-element cycle
//   "bi_a0"     : split pair with a_{i,tau(i)} = 0; params n >= 0, node
//   "bi"        : split pair with a_{i,tau(i)} = -1; params n_minus >= 0,
//                 n_plus, node
//   "bi_vee"    : as "bi" but n_minus > 0, -1 < n_plus - s_i < n_minus;
//                 the two-headed family merging at k = n_plus - s_i
//   "bi_wedge"  : as "bi_vee"; the two-tailed family splitting at
//                 k = n_plus + s_{tau(i)}
// "node" selects which node of a split pair plays the role of i (1-based,
// default: the first orbit representative).
ICrystalGraph make_builtin_icrystal(const CartanSatakeDatum& datum,
                                    const std::string& family,
                                    const std::map<std::string, long long>& params);

// Disjoint union over a common datum; names receive "A:" / "B:" prefixes
// when they collide.
ICrystalGraph disjoint_union_icrystal(const ICrystalGraph& a, const ICrystalGraph& b);

// Checks every defining clause on every (element, node) pair, plus the two
// derived per-node propositions (the a = 0 step law and the eight a = -1
// neighbor laws).  Violations carry human-readable witnesses.
CheckReport check_icrystal_axioms(const ICrystalGraph& g);

// ---------------------------------------------------------------------------
// Morphisms: linear maps given column-by-column on the source basis.
// cols[src][dst] is the coefficient of target element dst in mu(src).
// ---------------------------------------------------------------------------
struct ICrystalMorphism {
  ICrystalGraph source;
  ICrystalGraph target;
  std::vector<std::vector<Sqrt2Scalar>> cols;
};

enum class IMorphismClass {
  NotMorphism,
  Morphism,
  Strict,
  VeryStrict,
  Equivalence,
  Isomorphism,
};

std::string imorphism_class_str(IMorphismClass c);

struct IMorphismClassification {
  IMorphismClass cls = IMorphismClass::NotMorphism;
  std::string witness;  // set when cls == NotMorphism
};

// Classification ladder: the defining clauses give "morphism"; commuting
// with every operator on all of the span gives "strict"; strict maps sending
// elements to elements-or-zero are "very strict"; strict linear isomorphisms
// are "equivalences"; very strict equivalences are "isomorphisms".
IMorphismClassification check_icrystal_morphism(const ICrystalMorphism& m);

// The stated equivalences onto the built-in families:
//   "bi_pair"  : bi_rank1(n) u bi_rank1(-n)            -> bi_pair(n)
//   "bi_vee"   : bi(n-,n+) u bi(n+-s_i, n-+s_i)        -> bi_vee(n-,n+)
//   "bi_wedge" : bi(n-,n+) u bi(n--n+-s', -n+-2s')     -> bi_wedge(n-,n+)
// with s' = s_{tau(i)}.
ICrystalMorphism builtin_equivalence(const CartanSatakeDatum& datum,
                                     const std::string& family,
                                     const std::map<std::string, long long>& params);

// ---------------------------------------------------------------------------
// Serialization.  JSON stores operator rows for orbit representatives only;
// the remaining rows are reconstructed from the Hermitian symmetry
// (Btil_i b, b') = (b, Btil_{tau(i)} b') on import.  DOT draws one arrow per
// nonzero amplitude at representative nodes, labeled "(i, z)" with z omitted
// when it equals one.
// ---------------------------------------------------------------------------
std::string icrystal_to_json_text(const ICrystalGraph& g);
ICrystalGraph icrystal_from_json_text(const std::string& text);
std::string icrystal_to_dot(const ICrystalGraph& g);
std::string export_icrystal_graph(const ICrystalGraph& g, const std::string& format);

}  // namespace icrys
