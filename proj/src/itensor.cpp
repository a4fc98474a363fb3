#include "icrys/itensor.hpp"

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace icrys {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

int parity_of(long long n) { return static_cast<int>(((n % 2) + 2) % 2); }

using Row = std::vector<std::pair<int, Sqrt2Scalar>>;

// Sparse row accumulator; std::map keeps targets sorted.
void accumulate(std::map<int, Sqrt2Scalar>& acc, int dst, const Sqrt2Scalar& z) {
  if (z.is_zero()) return;
  auto [it, inserted] = acc.emplace(dst, z);
  if (!inserted) it->second = it->second + z;
}

Row collect(const std::map<int, Sqrt2Scalar>& acc) {
  Row row;
  for (const auto& [dst, z] : acc) {
    if (!z.is_zero()) row.emplace_back(dst, z);
  }
  return row;
}

void require_same_datum(const CartanSatakeDatum& a, const CartanSatakeDatum& b,
                        const std::string& who) {
  if (!(a == b)) fail(who + ": datum mismatch");
}

void require_commutation(const CrystalGraph& c, const std::string& who) {
  CheckReport rep = check_S_conditions_all(c);
  if (!rep.pass())
    fail(who + ": crystal factor fails the pairwise commutation conditions: " +
         rep.violations.front());
}

// ExtInt equality "lhs == rhs + n" used by the amplitude-halving conditions;
// the conditions only fire with both sides finite in practice, but the
// extended reading (-inf == -inf + n) is kept for uniformity.
bool ext_eq_plus(const ExtInt& lhs, const ExtInt& rhs, long long n) {
  return lhs == rhs + n;
}

}  // namespace

TensorStats tensor_stats(const ICrystalGraph& g, int b1, const CrystalGraph& c,
                         int b2, int i) {
  require_same_datum(g.datum, c.datum, "tensor_stats");
  const CartanSatakeDatum& datum = g.datum;
  const int a = datum.a_itau(i);
  TensorStats st;
  if (a == 2) {
    const ExtInt phi = c.phi[b2][i];
    const IExtInt beta = g.beta[b1][i];
    if (!phi.finite) {
      st.F = IExtInt::neg_inf();
    } else {
      const long long bump = ((beta + 1).parity() == parity_of(phi.get())) ? 1 : 0;
      st.F = IExtInt(phi.get() + bump);
    }
    st.B = beta;
    st.E = IExtInt::from_ext(phi);
  } else {
    const int ti = datum.tau[i];
    const long long s = (a == 0) ? 0 : datum.s[i];
    const long long shift = s - g.wti_signed(b1, i);
    st.F = IExtInt::from_ext(c.phi[b2][i]);
    st.B = g.beta[b1][i] + shift;
    st.E = IExtInt::from_ext(c.phi[b2][ti]) + shift;
  }
  return st;
}

ICrystalGraph tensor_icrystal_crystal(const ICrystalGraph& g, const CrystalGraph& c,
                                      std::vector<std::string>* warnings) {
  require_same_datum(g.datum, c.datum, "tensor_icrystal_crystal");
  require_commutation(c, "tensor_icrystal_crystal");
  const CartanSatakeDatum& datum = g.datum;
  const int n1 = g.size(), n2 = c.size(), rank = datum.rank;

  ICrystalGraph t;
  t.datum = datum;
  t.names.reserve(static_cast<size_t>(n1) * n2);
  t.wti.reserve(static_cast<size_t>(n1) * n2);
  for (int x = 0; x < n1; ++x) {
    for (int y = 0; y < n2; ++y) {
      t.names.push_back(g.names[x] + "⊗" + c.names[y]);
      t.wti.push_back(iweight_add(g.wti[x], project_weight(c.wt[y], datum), datum));
    }
  }
  t.beta.assign(t.names.size(), std::vector<IExtInt>(rank, IExtInt::neg_inf()));
  t.btil.assign(rank, std::vector<Row>(t.names.size()));

  const Sqrt2Scalar h = Sqrt2Scalar::inv_sqrt2();
  for (int x = 0; x < n1; ++x) {
    for (int y = 0; y < n2; ++y) {
      const int src = tensor_index(x, y, n2);
      for (int i = 0; i < rank; ++i) {
        const int a = datum.a_itau(i);
        const int ti = datum.tau[i];
        const TensorStats st = tensor_stats(g, x, c, y, i);
        const bool take_f = igt(st.F, st.B) && igt(st.F, st.E);
        const bool take_b = !take_f && igt(st.B, st.E);

        if (a == 2) {
          t.beta[src][i] = imax(st.F, st.B, st.E) + (-c.wt_i(y, i));
        } else {
          const long long s = (a == 0) ? 0 : datum.s[i];
          t.beta[src][i] =
              imax(st.F, st.B, st.E) + (g.wti_signed(x, i) - s - c.wt_i(y, ti));
        }

        std::map<int, Sqrt2Scalar> acc;
        const int f2 = c.f[y][i];                      // lowers the right factor at i
        const int e2 = c.e[y][a == 2 ? i : ti];        // raises the right factor
        if (take_f) {
          bool halve = false;
          if (a == -1 && st.F.finite() && st.E.finite() &&
              st.F.get() == st.E.get() + 1 && f2 >= 0) {
            halve = c.phi[f2][ti].finite && c.phi[y][ti].finite &&
                    ext_eq_plus(c.phi[f2][ti], c.phi[y][ti], 1);
          }
          if (f2 >= 0)
            accumulate(acc, tensor_index(x, f2, n2), halve ? h : Sqrt2Scalar::one());
        } else if (take_b) {
          bool halve_single = false;
          bool two_term = false;
          if (a == -1) {
            const int im = g.image_if_basis(i, x);
            halve_single = st.B.finite() && st.E.finite() &&
                           st.B.get() == st.E.get() + 1 && im >= 0 &&
                           g.beta[im][i] == g.beta[x][i] + (-2LL);
            two_term = st.F == st.B && !(st.B == g.beta[x][ti]);
            if (halve_single && two_term && warnings != nullptr) {
              warnings->push_back(
                  "tensor_icrystal_crystal: both amplitude-halving conditions of the "
                  "middle split-node branch fire at element \"" +
                  t.names[src] + "\" node " + std::to_string(i + 1) +
                  "; the single-target halving is applied");
            }
            if (halve_single) {
              accumulate(acc, tensor_index(im, y, n2), h);
            } else if (two_term) {
              for (const auto& [d1, z] : g.btil[i][x])
                accumulate(acc, tensor_index(d1, y, n2), z * h);
              if (f2 >= 0) accumulate(acc, tensor_index(x, f2, n2), h);
            }
          }
          if (a != -1 || (!halve_single && !two_term)) {
            for (const auto& [d1, z] : g.btil[i][x])
              accumulate(acc, tensor_index(d1, y, n2), z);
          }
        } else {
          // raise-the-right-factor branch
          if (a == -1) {
            const IExtInt phi_img = (e2 >= 0) ? IExtInt::from_ext(c.phi[e2][i])
                                              : IExtInt::neg_inf();
            const bool stay = st.E == st.F && e2 >= 0 &&
                              c.phi[e2][i] == c.phi[y][i];
            const bool drop_at_bound = st.E == st.B && st.B == g.beta[x][ti] &&
                                       e2 >= 0 && ilt(phi_img, st.E);
            const bool pair_term = st.E == st.F && igt(st.E, g.beta[x][ti]) &&
                                   e2 >= 0 &&
                                   ext_eq_plus(c.phi[e2][i], c.phi[y][i], -1);
            if (stay || drop_at_bound) {
              accumulate(acc, tensor_index(x, e2, n2), h);
            } else if (pair_term) {
              accumulate(acc, tensor_index(x, e2, n2), h);
              if (f2 >= 0) accumulate(acc, tensor_index(x, f2, n2), h);
            } else if (e2 >= 0) {
              accumulate(acc, tensor_index(x, e2, n2), Sqrt2Scalar::one());
            }
          } else if (e2 >= 0) {
            accumulate(acc, tensor_index(x, e2, n2), Sqrt2Scalar::one());
          }
        }
        t.btil[i][src] = collect(acc);
      }
    }
  }
  return t;
}

ICrystalGraph induce_icrystal(const CrystalGraph& c, const std::string& mode) {
  const bool general = (mode == "general");
  if (!general && mode != "seminormal")
    fail("induce_icrystal: unknown mode \"" + mode + "\" (expected general|seminormal)");
  require_commutation(c, "induce_icrystal");
  if (!general) {
    CheckReport rep = check_seminormal(c);
    if (!rep.pass())
      fail("induce_icrystal: seminormal mode on a non-seminormal crystal: " +
           rep.violations.front());
  }

  const CartanSatakeDatum& datum = c.datum;
  const int n = c.size(), rank = datum.rank;
  ICrystalGraph t;
  t.datum = datum;
  t.names = c.names;
  t.wti.reserve(n);
  for (int b = 0; b < n; ++b) t.wti.push_back(project_weight(c.wt[b], datum));
  t.beta.assign(n, std::vector<IExtInt>(rank, IExtInt::neg_inf()));
  t.btil.assign(rank, std::vector<Row>(n));

  const Sqrt2Scalar h = Sqrt2Scalar::inv_sqrt2();
  for (int b = 0; b < n; ++b) {
    for (int i = 0; i < rank; ++i) {
      const int a = datum.a_itau(i);
      const int ti = datum.tau[i];
      const ExtInt phi_i = c.phi[b][i];
      const int fi = c.f[b][i];
      std::map<int, Sqrt2Scalar> acc;

      if (a == 2) {
        const long long s = datum.s[i];
        const long long sa = std::llabs(s);
        if (!phi_i.finite || sa > phi_i.get()) {
          t.beta[b][i] = IExtInt(sa - c.wt_i(b, i));
          if (s != 0)
            accumulate(acc, b, Sqrt2Scalar::integer(s > 0 ? 1 : -1));
        } else if (parity_of(s) == parity_of(phi_i.get())) {
          t.beta[b][i] = IExtInt::from_ext(c.eps[b][i]);
          if (c.e[b][i] >= 0) accumulate(acc, c.e[b][i], Sqrt2Scalar::one());
        } else {
          t.beta[b][i] = IExtInt::from_ext(c.eps[b][i]) + 1;
          if (fi >= 0) accumulate(acc, fi, Sqrt2Scalar::one());
        }
      } else if (a == 0) {
        const ExtInt phi_t = c.phi[b][ti];
        const long long wt_t = c.wt_i(b, ti);
        const int et = c.e[b][ti];
        const bool lower = general ? (ExtInt(0) < phi_i && phi_t < phi_i)
                                   : (phi_t < phi_i);
        const bool dead = general && !lower && phi_i <= ExtInt(0) && phi_t < ExtInt(0);
        if (lower) {
          t.beta[b][i] = IExtInt(phi_i.get() - wt_t);
          if (fi >= 0) accumulate(acc, fi, Sqrt2Scalar::one());
        } else if (dead) {
          t.beta[b][i] = IExtInt(-wt_t);
        } else {
          t.beta[b][i] = IExtInt::from_ext(c.eps[b][ti]);
          if (et >= 0) accumulate(acc, et, Sqrt2Scalar::one());
        }
      } else {
        const long long s = datum.s[i];
        const long long st = datum.s[ti];
        const ExtInt phi_t = c.phi[b][ti];
        const ExtInt phi_ts = phi_t + s;
        const long long wt_t = c.wt_i(b, ti);
        const int et = c.e[b][ti];
        const ExtInt mid(general ? std::max<long long>(s, 0) : 0);
        const bool lower = general ? (mid < phi_i && phi_ts < phi_i)
                                   : (phi_ts < phi_i);
        const bool dead = general && !lower && phi_i <= mid && phi_ts < mid;
        if (lower) {
          t.beta[b][i] = IExtInt(phi_i.get() - s - wt_t);
          bool halve = false;
          if (fi >= 0 && ext_eq_plus(phi_i, phi_ts, 1)) {
            halve = c.phi[fi][ti].finite && phi_t.finite &&
                    ext_eq_plus(c.phi[fi][ti], phi_t, 1);
          }
          if (fi >= 0) accumulate(acc, fi, halve ? h : Sqrt2Scalar::one());
        } else if (dead) {
          t.beta[b][i] = IExtInt(std::max<long long>(-s, 0) - wt_t);
          if (phi_i == ExtInt(s) && s > 0 && fi >= 0) accumulate(acc, fi, h);
        } else {
          t.beta[b][i] = IExtInt::from_ext(c.eps[b][ti]);
          const bool stay = phi_i == phi_ts && et >= 0 && c.phi[et][i] == phi_i;
          const bool drop_at_bound = general && phi_ts == ExtInt(0) && s <= 0 &&
                                     et >= 0 && c.phi[et][i] < ExtInt(0);
          const bool pair_term = phi_i == phi_ts &&
                                 ExtInt(std::max<long long>(0, -st)) < phi_i &&
                                 et >= 0 && ext_eq_plus(c.phi[et][i], phi_i, -1);
          if (stay || drop_at_bound) {
            accumulate(acc, et, h);
          } else if (pair_term) {
            accumulate(acc, et, h);
            if (fi >= 0) accumulate(acc, fi, h);
          } else if (et >= 0) {
            accumulate(acc, et, Sqrt2Scalar::one());
          }
        }
      }
      t.btil[i][b] = collect(acc);
    }
  }
  return t;
}

CheckReport check_associativity(const ICrystalGraph& b1, const CrystalGraph& b2,
                                const CrystalGraph& b3) {
  const ICrystalGraph left =
      tensor_icrystal_crystal(tensor_icrystal_crystal(b1, b2), b3);
  const ICrystalGraph right = tensor_icrystal_crystal(b1, tensor_crystals(b2, b3));

  CheckReport rep;
  auto bad = [&rep](const std::string& msg) { rep.violations.push_back(msg); };
  if (left.size() != right.size()) {
    bad("associativity: size mismatch " + std::to_string(left.size()) + " vs " +
        std::to_string(right.size()));
    return rep;
  }
  const int rank = left.datum.rank;
  for (int b = 0; b < left.size(); ++b) {
    if (!(left.wti[b] == right.wti[b])) {
      bad("associativity: weight mismatch at element " + std::to_string(b) + " (\"" +
          left.names[b] + "\"): " + iweight_str(left.wti[b]) + " vs " +
          iweight_str(right.wti[b]));
      return rep;
    }
    for (int i = 0; i < rank; ++i) {
      if (!(left.beta[b][i] == right.beta[b][i])) {
        bad("associativity: beta mismatch at element " + std::to_string(b) + " (\"" +
            left.names[b] + "\") node " + std::to_string(i + 1) + ": " +
            left.beta[b][i].str() + " vs " + right.beta[b][i].str());
        return rep;
      }
      if (left.btil[i][b] != right.btil[i][b]) {
        bad("associativity: operator mismatch at element " + std::to_string(b) +
            " (\"" + left.names[b] + "\") node " + std::to_string(i + 1));
        return rep;
      }
    }
  }
  return rep;
}

ICrystalMorphism tensor_morphisms(const ICrystalMorphism& m1, const CrystalMorphism& m2) {
  ICrystalMorphism r;
  r.source = tensor_icrystal_crystal(m1.source, m2.source);
  r.target = tensor_icrystal_crystal(m1.target, m2.target);
  const int s1 = m1.source.size(), s2 = m2.source.size();
  const int t1 = m1.target.size(), t2 = m2.target.size();
  r.cols.assign(static_cast<size_t>(s1) * s2,
                std::vector<Sqrt2Scalar>(static_cast<size_t>(t1) * t2,
                                         Sqrt2Scalar::zero()));
  for (int x1 = 0; x1 < s1; ++x1) {
    for (int x2 = 0; x2 < s2; ++x2) {
      const int y2 = m2.map[x2];
      if (y2 < 0) continue;
      auto& col = r.cols[tensor_index(x1, x2, s2)];
      for (int y1 = 0; y1 < t1; ++y1) {
        const Sqrt2Scalar& z = m1.cols[x1][y1];
        if (!z.is_zero()) col[tensor_index(y1, y2, t2)] = z;
      }
    }
  }
  return r;
}

}  // namespace icrys
