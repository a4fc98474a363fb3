#pragma once

#include <string>
#include <vector>

#include "icrys/scalars.hpp"

namespace icrys {

// ---------------------------------------------------------------------------
// CartanSatakeDatum: a symmetrizable GCM with symmetrizers d_i, a diagram
// involution tau, and integer parameters s_i, restricted to the quasi-split
// shapes a_{i,tau(i)} in {2, 0, -1}.  Node indices are 0-based internally and
// 1-based in messages and serialized form.
// ---------------------------------------------------------------------------
struct CartanSatakeDatum {
  int rank = 0;
  std::vector<std::vector<int>> gcm;
  std::vector<int> d;
  std::vector<int> tau;  // 0-based images
  std::vector<long long> s;
  std::vector<int> i_tau;  // one representative per tau-orbit, ascending

  int a(int i, int j) const { return gcm[i][j]; }
  int a_itau(int i) const { return gcm[i][tau[i]]; }
  bool fixed(int i) const { return tau[i] == i; }
  int orbit_of(int i) const;  // index into i_tau
  bool is_rep(int i) const;
  int num_orbits() const { return static_cast<int>(i_tau.size()); }

  bool operator==(const CartanSatakeDatum&) const = default;
};

// Validates all datum invariants in the documented order and returns the
// completed datum (with i_tau defaulted to the smallest member per orbit).
// Throws std::runtime_error naming the first violated invariant and the
// offending 1-based indices.
CartanSatakeDatum validate_datum(const std::vector<std::vector<int>>& gcm,
                                 const std::vector<int>& d,
                                 const std::vector<int>& tau_one_based,
                                 const std::vector<long long>& s,
                                 const std::vector<int>& i_tau_one_based = {});

CartanSatakeDatum datum_from_json_text(const std::string& text);
std::string datum_to_json_text(const CartanSatakeDatum& datum);

// ---------------------------------------------------------------------------
// Weight: an element of X as pairing coordinates (<h_i, lambda>)_i.
// ---------------------------------------------------------------------------
using Weight = std::vector<long long>;

Weight weight_zero(const CartanSatakeDatum& datum);
Weight weight_add(const Weight& x, const Weight& y);
Weight weight_sub(const Weight& x, const Weight& y);
Weight weight_neg(const Weight& x);
// alpha_i as a Weight: coordinate vector (a_{j,i})_j.
Weight alpha_weight(const CartanSatakeDatum& datum, int i);
// tau(lambda): <h_i, tau(lambda)> = <h_{tau(i)}, lambda>.
Weight tau_weight(const CartanSatakeDatum& datum, const Weight& w);
bool weight_dominant(const Weight& w);
std::string weight_str(const Weight& w);

// ---------------------------------------------------------------------------
// IWeight: an element of X^i = X / { lambda + tau(lambda) }, stored as one
// value per tau-orbit (ordered like i_tau): the parity of <h_i, .> on fixed
// nodes, the integer <h_i - h_{tau(i)}, .> on split orbits.  These values
// form a complete invariant of the class.
// ---------------------------------------------------------------------------
struct IWeight {
  std::vector<long long> val;
  bool operator==(const IWeight&) const = default;
};

IWeight project_weight(const Weight& w, const CartanSatakeDatum& datum);
IWeight iweight_zero(const CartanSatakeDatum& datum);
IWeight iweight_add(const IWeight& x, const IWeight& y, const CartanSatakeDatum& datum);
IWeight iweight_sub(const IWeight& x, const IWeight& y, const CartanSatakeDatum& datum);
// bar(alpha_i) in X^i.
IWeight ibar_alpha(const CartanSatakeDatum& datum, int i);
// wt^i_i for a fixed node (a_{i,tau(i)} = 2): the parity bit in {0,1}.
int iweight_parity(const IWeight& w, int i, const CartanSatakeDatum& datum);
// wt^i_i for a split orbit: <h_i - h_{tau(i)}, .> with the sign adjusted to i.
long long iweight_signed(const IWeight& w, int i, const CartanSatakeDatum& datum);
std::string iweight_str(const IWeight& w);

}  // namespace icrys
