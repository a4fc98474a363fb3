#pragma once

#include <string>
#include <vector>

#include "icrys/crystal.hpp"
#include "icrys/icrystal.hpp"
#include "icrys/rootdata.hpp"
#include "icrys/scalars.hpp"

namespace icrys {

// ---------------------------------------------------------------------------
// Mixed tensor product: an ICrystalGraph left factor combined with a
// CrystalGraph right factor.  The action of each operator on a pair is
// steered by three per-node statistics that rank the competing moves
// "lower the right factor" (F), "act on the left factor" (B), and "raise
// the right factor" (E).
// ---------------------------------------------------------------------------
struct TensorStats {
  IExtInt F, B, E;
};

// Statistics for the pair (b1 in g, b2 in c) at node i (0-based).
//   fixed node   (a_{i,tau(i)} = 2):
//     F = phi_i(b2) + [parity(beta_i(b1) + 1) == parity(phi_i(b2))],
//     B = beta_i(b1),  E = phi_i(b2);
//     when phi_i(b2) = -inf the parity bump is suppressed and F = -inf.
//   split node   (a_{i,tau(i)} in {0, -1}, with s_i read as 0 when a = 0):
//     F = phi_i(b2),
//     B = beta_i(b1) - wti_i(b1) + s_i,
//     E = phi_{tau(i)}(b2) - wti_i(b1) + s_i.
// Throws on datum mismatch.
TensorStats tensor_stats(const ICrystalGraph& g, int b1, const CrystalGraph& c,
                         int b2, int i);

// The mixed tensor product.  Elements are the pairs in row-major order
// (tensor_index(b1, b2, c.size())), named "<b1>⊗<b2>".
//
// Preconditions: the two factors share a datum, and the crystal factor
// passes the pairwise commutation conditions at every split orbit (throws
// otherwise, quoting the first failure).
//
// The middle split-node branch ("act on the left factor") carries two
// amplitude-halving conditions that are tested in order; `warnings`, when
// non-null, collects a line for every (element, node) where both fire at
// once (the first is applied).
ICrystalGraph tensor_icrystal_crystal(const ICrystalGraph& g, const CrystalGraph& c,
                                      std::vector<std::string>* warnings = nullptr);

// The structure induced on a crystal itself, element names preserved.
//   mode "general":    valid for any crystal passing the commutation
//                      conditions; obtained by pairing with the one-element
//                      structure and reading the result back on the crystal.
//   mode "seminormal": the simplified branch tests valid when every
//                      eps_i/phi_i counts operator applications (checked).
// Both modes agree whenever the seminormal mode is applicable.
ICrystalGraph induce_icrystal(const CrystalGraph& c, const std::string& mode);

// Verifies that re-bracketing b1 ⊗ (b2 ⊗ b3) -> (b1 ⊗ b2) ⊗ b3 is an
// isomorphism.  With row-major pair indexing the underlying bijection is the
// identity on indices, so the two structures are compared entry by entry;
// violations name the first disagreeing (element, node).  Preconditions of
// the two tensor constructions apply (b2, b3, and b2 ⊗ b3 must pass the
// commutation conditions).
CheckReport check_associativity(const ICrystalGraph& b1, const CrystalGraph& b2,
                                const CrystalGraph& b3);

// The pair map (m1 ⊗ m2)(b1 ⊗ b2) = m1(b1) ⊗ m2(b2) between tensor products.
// Classification of the result is governed by the factors: morphism ⊗
// morphism is a morphism, strict ⊗ strict is strict, very strict ⊗ strict is
// very strict, equivalence ⊗ isomorphism is an equivalence, isomorphism ⊗
// isomorphism is an isomorphism.
ICrystalMorphism tensor_morphisms(const ICrystalMorphism& m1, const CrystalMorphism& m2);

}  // namespace icrys
