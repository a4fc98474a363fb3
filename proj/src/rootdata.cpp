#include "icrys/rootdata.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace icrys {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string idx1(int i) { return std::to_string(i + 1); }

}  // namespace

int CartanSatakeDatum::orbit_of(int i) const {
  for (int k = 0; k < static_cast<int>(i_tau.size()); ++k) {
    if (i_tau[k] == i || i_tau[k] == tau[i]) return k;
  }
  fail("orbit_of: node index " + idx1(i) + " not covered by i_tau");
}

bool CartanSatakeDatum::is_rep(int i) const {
  for (int r : i_tau) {
    if (r == i) return true;
  }
  return false;
}

CartanSatakeDatum validate_datum(const std::vector<std::vector<int>>& gcm,
                                 const std::vector<int>& d,
                                 const std::vector<int>& tau_one_based,
                                 const std::vector<long long>& s,
                                 const std::vector<int>& i_tau_one_based) {
  const int n = static_cast<int>(gcm.size());
  if (n == 0) fail("datum: empty Cartan matrix");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(gcm[i].size()) != n)
      fail("datum: Cartan matrix row " + idx1(i) + " has wrong length");
  }
  if (static_cast<int>(d.size()) != n) fail("datum: d has wrong length");
  if (static_cast<int>(tau_one_based.size()) != n) fail("datum: tau has wrong length");
  if (static_cast<int>(s.size()) != n) fail("datum: s has wrong length");
  for (int i = 0; i < n; ++i) {
    if (tau_one_based[i] < 1 || tau_one_based[i] > n)
      fail("datum: tau(" + idx1(i) + ") out of range");
  }
  std::vector<int> tau(n);
  for (int i = 0; i < n; ++i) tau[i] = tau_one_based[i] - 1;

  // (1) symmetrizable GCM with positive symmetrizers
  for (int i = 0; i < n; ++i) {
    if (gcm[i][i] != 2) fail("invariant violated: a_{i,i} ≠ 2 (i=" + idx1(i) + ")");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && gcm[i][j] > 0)
        fail("invariant violated: a_{i,j} > 0 (i=" + idx1(i) + ", j=" + idx1(j) + ")");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (d[i] <= 0) fail("invariant violated: d_i ≤ 0 (i=" + idx1(i) + ")");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (static_cast<long long>(d[i]) * gcm[i][j] != static_cast<long long>(d[j]) * gcm[j][i])
        fail("invariant violated: d_i a_{i,j} ≠ d_j a_{j,i} (i=" + idx1(i) + ", j=" + idx1(j) +
             ")");
    }
  }

  // (2) tau is a diagram involution
  for (int i = 0; i < n; ++i) {
    if (tau[tau[i]] != i) fail("invariant violated: τ² ≠ id (i=" + idx1(i) + ")");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (gcm[tau[i]][tau[j]] != gcm[i][j])
        fail("invariant violated: a_{τ(i),τ(j)} ≠ a_{i,j} (i=" + idx1(i) + ", j=" + idx1(j) + ")");
    }
  }

  // (3) quasi-split shape
  for (int i = 0; i < n; ++i) {
    const int a = gcm[i][tau[i]];
    if (a != 2 && a != 0 && a != -1)
      fail("invariant violated: a_{i,τ(i)} ∉ {2, 0, -1} (i=" + idx1(i) + ")");
  }

  // (4) parameter constraints
  for (int i = 0; i < n; ++i) {
    const int a = gcm[i][tau[i]];
    if (a == 0 && s[i] != 0)
      fail("invariant violated: s_i ≠ 0 with a_{i,τ(i)} = 0 (i=" + idx1(i) + ")");
    if (a == -1 && s[i] + s[tau[i]] != 1)
      fail("invariant violated: s_i + s_{τ(i)} ≠ 1 (i=" + idx1(i) + ")");
  }

  // (5) orbit representatives
  std::vector<int> i_tau;
  if (i_tau_one_based.empty()) {
    for (int i = 0; i < n; ++i) {
      if (i <= tau[i]) i_tau.push_back(i);
    }
  } else {
    for (int r1 : i_tau_one_based) {
      if (r1 < 1 || r1 > n) fail("datum: i_tau entry out of range");
      i_tau.push_back(r1 - 1);
    }
    std::vector<int> seen(n, 0);
    for (int r : i_tau) {
      seen[r] += 1;
      if (tau[r] != r) seen[tau[r]] += 1;
    }
    bool ok = true;
    for (int i = 0; i < n; ++i) ok = ok && seen[i] == 1;
    if (!ok)
      fail("invariant violated: i_tau does not contain exactly one element of each τ-orbit");
  }

  CartanSatakeDatum datum;
  datum.rank = n;
  datum.gcm = gcm;
  datum.d = d;
  datum.tau = tau;
  datum.s = s;
  datum.i_tau = i_tau;
  return datum;
}

CartanSatakeDatum datum_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(std::string("datum: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("datum: JSON root must be an object");
  for (const char* key : {"gcm", "d", "tau", "s"}) {
    if (!j.contains(key)) fail(std::string("datum: missing field \"") + key + "\"");
  }
  std::vector<std::vector<int>> gcm;
  try {
    gcm = j.at("gcm").get<std::vector<std::vector<int>>>();
  } catch (const std::exception&) {
    fail("datum: field \"gcm\" must be a matrix of integers");
  }
  std::vector<int> d, tau;
  std::vector<long long> s;
  try {
    d = j.at("d").get<std::vector<int>>();
    tau = j.at("tau").get<std::vector<int>>();
    s = j.at("s").get<std::vector<long long>>();
  } catch (const std::exception&) {
    fail("datum: fields \"d\", \"tau\", \"s\" must be integer arrays");
  }
  std::vector<int> i_tau;
  if (j.contains("i_tau")) {
    try {
      i_tau = j.at("i_tau").get<std::vector<int>>();
    } catch (const std::exception&) {
      fail("datum: field \"i_tau\" must be an integer array");
    }
  }
  return validate_datum(gcm, d, tau, s, i_tau);
}

std::string datum_to_json_text(const CartanSatakeDatum& datum) {
  nlohmann::ordered_json j;
  j["gcm"] = datum.gcm;
  j["d"] = datum.d;
  std::vector<int> tau1, itau1;
  for (int t : datum.tau) tau1.push_back(t + 1);
  for (int r : datum.i_tau) itau1.push_back(r + 1);
  j["tau"] = tau1;
  j["s"] = datum.s;
  j["i_tau"] = itau1;
  return j.dump();
}

Weight weight_zero(const CartanSatakeDatum& datum) {
  return Weight(static_cast<size_t>(datum.rank), 0);
}

Weight weight_add(const Weight& x, const Weight& y) {
  if (x.size() != y.size()) fail("weight_add: size mismatch");
  Weight out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

Weight weight_sub(const Weight& x, const Weight& y) {
  if (x.size() != y.size()) fail("weight_sub: size mismatch");
  Weight out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

Weight weight_neg(const Weight& x) {
  Weight out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
  return out;
}

Weight alpha_weight(const CartanSatakeDatum& datum, int i) {
  Weight out(static_cast<size_t>(datum.rank));
  for (int jj = 0; jj < datum.rank; ++jj) out[jj] = datum.gcm[jj][i];
  return out;
}

Weight tau_weight(const CartanSatakeDatum& datum, const Weight& w) {
  Weight out(w.size());
  for (int i = 0; i < datum.rank; ++i) out[i] = w[datum.tau[i]];
  return out;
}

bool weight_dominant(const Weight& w) {
  for (long long c : w) {
    if (c < 0) return false;
  }
  return true;
}

std::string weight_str(const Weight& w) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << ",";
    os << w[i];
  }
  os << ")";
  return os.str();
}

IWeight project_weight(const Weight& w, const CartanSatakeDatum& datum) {
  if (static_cast<int>(w.size()) != datum.rank) fail("project_weight: size mismatch");
  IWeight out;
  out.val.resize(datum.i_tau.size());
  for (size_t k = 0; k < datum.i_tau.size(); ++k) {
    const int i = datum.i_tau[k];
    if (datum.fixed(i)) {
      out.val[k] = ((w[i] % 2) + 2) % 2;
    } else {
      out.val[k] = w[i] - w[datum.tau[i]];
    }
  }
  return out;
}

IWeight iweight_zero(const CartanSatakeDatum& datum) {
  IWeight out;
  out.val.assign(datum.i_tau.size(), 0);
  return out;
}

IWeight iweight_add(const IWeight& x, const IWeight& y, const CartanSatakeDatum& datum) {
  if (x.val.size() != datum.i_tau.size() || y.val.size() != datum.i_tau.size())
    fail("iweight_add: size mismatch");
  IWeight out;
  out.val.resize(datum.i_tau.size());
  for (size_t k = 0; k < datum.i_tau.size(); ++k) {
    const int i = datum.i_tau[k];
    out.val[k] = datum.fixed(i) ? (((x.val[k] + y.val[k]) % 2 + 2) % 2) : x.val[k] + y.val[k];
  }
  return out;
}

IWeight iweight_sub(const IWeight& x, const IWeight& y, const CartanSatakeDatum& datum) {
  if (x.val.size() != datum.i_tau.size() || y.val.size() != datum.i_tau.size())
    fail("iweight_sub: size mismatch");
  IWeight out;
  out.val.resize(datum.i_tau.size());
  for (size_t k = 0; k < datum.i_tau.size(); ++k) {
    const int i = datum.i_tau[k];
    out.val[k] = datum.fixed(i) ? (((x.val[k] - y.val[k]) % 2 + 2) % 2) : x.val[k] - y.val[k];
  }
  return out;
}

IWeight ibar_alpha(const CartanSatakeDatum& datum, int i) {
  return project_weight(alpha_weight(datum, i), datum);
}

int iweight_parity(const IWeight& w, int i, const CartanSatakeDatum& datum) {
  if (w.val.size() != datum.i_tau.size()) fail("iweight_parity: size mismatch");
  if (!datum.fixed(i)) fail("iweight_parity: node " + idx1(i) + " is not τ-fixed");
  return static_cast<int>(w.val[datum.orbit_of(i)]);
}

long long iweight_signed(const IWeight& w, int i, const CartanSatakeDatum& datum) {
  if (w.val.size() != datum.i_tau.size()) fail("iweight_signed: size mismatch");
  if (datum.fixed(i)) fail("iweight_signed: node " + idx1(i) + " is τ-fixed");
  const int k = datum.orbit_of(i);
  return datum.i_tau[k] == i ? w.val[k] : -w.val[k];
}

std::string iweight_str(const IWeight& w) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < w.val.size(); ++i) {
    if (i) os << ",";
    os << w.val[i];
  }
  os << ")";
  return os.str();
}

}  // namespace icrys
