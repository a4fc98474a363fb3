#pragma once

#include <string>
#include <vector>

#include "icrys/binfty.hpp"
#include "icrys/crystal.hpp"
#include "icrys/icrystal.hpp"
#include "icrys/rootdata.hpp"
#include "icrys/scalars.hpp"

namespace icrys {

// ---------------------------------------------------------------------------
// The compatible dominant weight sigma of a datum:
//   <h_i, sigma> = |s_i|                 at a fixed node,
//                  0                     at a split node with a_{i,tau(i)} = 0,
//                  max(s_i, 0)           at an a = -1 orbit representative,
//                  max(-s_{tau(i)}, 0)   at its partner,
// so that <h_i - h_{tau(i)}, sigma> = s_i at every a = -1 representative.
// Twisting by sigma realigns every highest-weight crystal B(lambda) with the
// one-element structure below, which is what makes the tower of projections
// between the B(lambda)^sigma possible.
// ---------------------------------------------------------------------------
struct SigmaWeight {
  Weight sigma;
};

SigmaWeight compute_sigma(const CartanSatakeDatum& datum);

// The one-element icrystal with wti = bar(sigma), beta = 0 at every node and
// all operators zero.
ICrystalGraph b_zero_sigma(const CartanSatakeDatum& datum);

// The one-element icrystal t_zeta over an arbitrary orbit-weight (wrapper
// around the "t_zeta" builtin family; parities are normalized).
ICrystalGraph t_zeta_graph(const CartanSatakeDatum& datum, const IWeight& zeta);

// B(lambda)^sigma := b_zero_sigma tensor B(lambda) (mixed tensor product).
// With a one-element left factor the pair indices collapse, so element y of
// the result is pi_lambda(b) = y of B(lambda).  Requires lambda dominant;
// cap bounds the B(lambda) walk.
ICrystalGraph b_lambda_sigma(const CartanSatakeDatum& datum, const Weight& lambda,
                             long long cap = 200000);

// The identity-on-elements comparison map B(lambda)^sigma ->
// T_{bar(sigma)} tensor B(lambda); classifies as an isomorphism.
ICrystalMorphism b_lambda_sigma_vs_t_tensor(const CartanSatakeDatum& datum,
                                            const Weight& lambda,
                                            long long cap = 200000);

// ---------------------------------------------------------------------------
// Word covers.  For every element of realization.graph(): the breadth-first
// word of each f-parent extended by the closing edge, plus the breadth-first
// word of the element itself (the highest element gets the empty word).
// These are the witnesses on which the projections below are evaluated and
// cross-checked.
// ---------------------------------------------------------------------------
std::vector<std::vector<BWord>> all_covering_words(const BLambda& realization,
                                                   long long cap = 200000);

// gamma_nu: B(sigma+nu+tau(nu)) -> b_zero_sigma, the delta map at the highest
// element (everything else goes to zero).  The source carries the induced
// icrystal structure.  Requires nu dominant.
ICrystalMorphism gamma_nu(const CartanSatakeDatum& datum, const Weight& nu,
                          long long cap = 200000);

// rho_lambda: B(sigma+lambda) -> B(lambda)^sigma, sending the value of a word
// in B(sigma+lambda) to its value in B(lambda) (zero when the walk dies).
// Every covering word of each source element is evaluated and the results
// must agree; a disagreement throws, quoting the element and both words.
// Requires lambda dominant.
ICrystalMorphism rho_lambda(const CartanSatakeDatum& datum, const Weight& lambda,
                            long long cap = 200000);

// The injective very strict section B(lambda)^sigma -> B(sigma+lambda)
// sending the value of a word in B(lambda) to its value in B(sigma+lambda).
ICrystalMorphism rho_lambda_injection(const CartanSatakeDatum& datum,
                                      const Weight& lambda, long long cap = 200000);

// pi^i_{lambda,nu}: B(lambda+nu+tau(nu))^sigma -> B(lambda)^sigma, sending
// the value of a word in B(lambda+nu+tau(nu)) to its value in B(lambda);
// same word-cover evaluation and agreement policy as rho_lambda.  Requires
// lambda and nu dominant.
ICrystalMorphism pi_i_lambda_nu(const CartanSatakeDatum& datum, const Weight& lambda,
                                const Weight& nu, long long cap = 200000);

// Column composition (second o first).  Requires first.target and
// second.source to have the same element count.
ICrystalMorphism compose_icrystal_morphisms(const ICrystalMorphism& second,
                                            const ICrystalMorphism& first);

// ---------------------------------------------------------------------------
// The limit structure on t_zeta tensor B(infinity): elements are pairs of an
// orbit-weight zeta and a word b; every statistic is evaluated inside the
// finite quotients B(lambda_k)^sigma along the chain
//   lambda_0 = the smallest dominant weight with bar(sigma+lambda_0) = zeta,
//   lambda_{k+1} = lambda_k + rho + tau(rho)    (<h_i, rho> = 1 for all i),
// until two consecutive depths agree.
// ---------------------------------------------------------------------------
struct LimitElement {
  IWeight zeta;
  BWord b;
};

struct LimitTerm {
  Sqrt2Scalar amp;
  BWord b;
};

// One chain sample: beta and the operator image of the word's value inside
// B(lambda)^sigma.  in_range is false when the word dies in B(lambda) (the
// element projects to zero there), in which case the other fields are blank.
struct LimitDepthSample {
  Weight lambda;
  bool in_range = false;
  IExtInt beta = IExtInt::neg_inf();
  std::vector<LimitTerm> terms;
  std::string str() const;
};

struct LimitResult {
  IWeight zeta;
  BWord b;
  int node = 0;
  IExtInt beta = IExtInt::neg_inf();
  std::vector<LimitTerm> terms;  // image = sum of amp * (t_zeta tensor term)
  int depth_stabilized = 0;      // first depth of the agreeing pair
  std::vector<LimitDepthSample> trace;  // all evaluated depths, in order
};

// The smallest dominant lambda with bar(sigma + lambda) = zeta (fixed-orbit
// entries of zeta are normalized to parity bits first).  Throws when zeta
// has the wrong number of orbit entries.
Weight limit_lambda_representative(const CartanSatakeDatum& datum, const IWeight& zeta);

// Evaluate one chain sample for the word at the given lambda.
LimitDepthSample limit_sample(const CartanSatakeDatum& datum, const BWord& b, int node,
                              const Weight& lambda, long long cap = 400000);

// Agreement of two samples: both in range, equal beta, and equal image terms
// up to reordering and word equality in B(infinity).
bool limit_samples_agree(const CartanSatakeDatum& datum, const LimitDepthSample& x,
                         const LimitDepthSample& y);

// beta_i and Btil_i at t_zeta tensor b, stabilized over the chain.  Walks at
// most max_depth + 1 depths and throws, quoting the last two samples, if the
// final two still disagree.
LimitResult limit_action(const CartanSatakeDatum& datum, const IWeight& zeta,
                         const BWord& b, int node, int max_depth = 8,
                         long long cap = 400000);
IExtInt limit_beta(const CartanSatakeDatum& datum, const IWeight& zeta, const BWord& b,
                   int node, int max_depth = 8, long long cap = 400000);

// ---------------------------------------------------------------------------
// Annihilated elements and the highest-element characterization.
// ---------------------------------------------------------------------------

// Indices of the elements with beta = 0 and a vanishing operator at every
// node.
std::vector<int> beta_btil_annihilated(const ICrystalGraph& g);

// Scans B(sigma+nu+tau(nu)) (induced structure) and passes exactly when the
// highest element is the unique annihilated one.  Requires nu dominant.
struct HighestWeightCharacterizationReport {
  Weight ambient;  // sigma + nu + tau(nu)
  int size = 0;
  int highest_index = -1;
  std::vector<int> annihilated;
  bool pass = false;
  std::string str() const;
};

HighestWeightCharacterizationReport check_highest_weight_characterization(
    const CartanSatakeDatum& datum, const Weight& nu, long long cap = 200000);

// ---------------------------------------------------------------------------
// JSON reports (schema 1): a morphism as its sparse matrix together with its
// classification, and a limit evaluation with its full stabilization trace.
// ---------------------------------------------------------------------------
std::string imorphism_to_json_text(const ICrystalMorphism& m);
std::string limit_result_to_json_text(const LimitResult& r);

}  // namespace icrys
