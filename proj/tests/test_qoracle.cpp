// Tests for the symbolic q-arithmetic layer and the rank-two oracle: Laurent
// rational normal forms, q-combinatorial identities (cross-checked against an
// independent q-Pascal recursion), module construction with its derived
// actions, the squared-norm table with exact leading terms, the spectrum of
// the node generator on sl2 strings, and the crystal-limit pipeline compared
// edge-for-edge against the combinatorial tensor rule.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "icrys/crystal.hpp"
#include "icrys/icrystal.hpp"
#include "icrys/itensor.hpp"
#include "icrys/qoracle.hpp"
#include "icrys/rootdata.hpp"
#include "icrys/scalars.hpp"

using namespace icrys;

namespace {

CartanSatakeDatum a1(long long s = 1) { return validate_datum({{2}}, {1}, {1}, {s}); }

CartanSatakeDatum a1xa1() {
  return validate_datum({{2, 0}, {0, 2}}, {1, 1}, {2, 1}, {0, 0});
}

CartanSatakeDatum a2flip(long long s1 = 1) {
  return validate_datum({{2, -1}, {-1, 2}}, {1, 1}, {2, 1}, {s1, 1 - s1});
}

LaurentRational qi(long long n) { return q_symbols("qint", {n}); }
LaurentRational br(long long a) { return q_symbols("brace", {a}); }
LaurentRational qp(long long e) { return LaurentRational::q_power(e); }
LaurentRational li(long long v) { return LaurentRational::integer(v); }

using Row = std::vector<std::pair<int, Sqrt2Scalar>>;

std::string row_str(const Row& row) {
  std::string out = "{";
  for (const auto& [dst, z] : row)
    out += " (" + std::to_string(dst) + ", " + z.str() + ")";
  return out + " }";
}

// Field-by-field comparison; empty result means equal, otherwise a message
// naming the first difference.
std::string structure_diff(const ICrystalGraph& a, const ICrystalGraph& b,
                           bool compare_names = true) {
  if (!(a.datum == b.datum)) return "datum differs";
  if (a.size() != b.size())
    return "size " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
  for (int x = 0; x < a.size(); ++x) {
    if (compare_names && a.names[x] != b.names[x])
      return "name of element " + std::to_string(x) + ": " + a.names[x] + " vs " +
             b.names[x];
    if (!(a.wti[x] == b.wti[x]))
      return "weight of element " + std::to_string(x) + " (" + a.names[x] + "): " +
             iweight_str(a.wti[x]) + " vs " + iweight_str(b.wti[x]);
    for (int i = 0; i < a.datum.rank; ++i) {
      if (!(a.beta[x][i] == b.beta[x][i]))
        return "beta of element " + std::to_string(x) + " (" + a.names[x] +
               ") node " + std::to_string(i + 1) + ": " + a.beta[x][i].str() +
               " vs " + b.beta[x][i].str();
      if (a.btil[i][x] != b.btil[i][x])
        return "operator row of element " + std::to_string(x) + " (" + a.names[x] +
               ") node " + std::to_string(i + 1) + ": " + row_str(a.btil[i][x]) +
               " vs " + row_str(b.btil[i][x]);
    }
  }
  return "";
}

QMat kron_local(const QMat& a, const QMat& b) {
  const size_t ra = a.size(), ca = a[0].size(), rb = b.size(), cb = b[0].size();
  QMat m = q_mat_zero(static_cast<int>(ra * rb), static_cast<int>(ca * cb));
  for (size_t i = 0; i < ra; ++i)
    for (size_t j = 0; j < ca; ++j)
      for (size_t k = 0; k < rb; ++k)
        for (size_t l = 0; l < cb; ++l) m[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
  return m;
}

QMat diag_local(const QVec& d) {
  QMat m = q_mat_zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t k = 0; k < d.size(); ++k) m[k][k] = d[k];
  return m;
}

// The coproduct action of the two generators on (a = -1 module) (x) (natural
// three-letter module), built directly from the definitions; used to check
// explicit highest-weight vectors.
struct TensorOps {
  QMat DBi, DBt, tD;
  int dim = 0;
};

TensorOps natural_tensor_ops(const RankTwoModule& m) {
  REQUIRE(m.a == -1);
  const long long d = m.d, s = m.s_i, st = m.s_tau;
  const int dimL = m.dim, dimR = 3, dim = dimL * dimR;
  const std::vector<long long> wt_i = {1, -1, 0}, wt_t = {0, 1, -1};
  QMat FiR = q_mat_zero(dimR, dimR), FtR = q_mat_zero(dimR, dimR);
  QMat EiR = q_mat_zero(dimR, dimR), EtR = q_mat_zero(dimR, dimR);
  FiR[1][0] = li(1);
  FtR[2][1] = li(1);
  EiR[0][1] = li(1);
  EtR[1][2] = li(1);
  QVec KiRinv(3), KtRinv(3);
  for (int c = 0; c < 3; ++c) {
    KiRinv[c] = qp(-d * wt_i[c]);
    KtRinv[c] = qp(-d * wt_t[c]);
  }
  QVec kLinv(dimL);
  for (int j = 0; j < dimL; ++j) kLinv[j] = li(1) / m.k_diag[j];
  const QMat idL = q_mat_identity(dimL);
  TensorOps ops;
  ops.dim = dim;
  ops.DBi = q_mat_add(
      q_mat_add(kron_local(m.Bi, diag_local(KiRinv)), kron_local(idL, FiR)),
      kron_local(diag_local(kLinv),
                 q_mat_scale(qp(d * s), q_mat_mul(EtR, diag_local(KiRinv)))));
  ops.DBt = q_mat_add(
      q_mat_add(kron_local(m.Btau, diag_local(KtRinv)), kron_local(idL, FtR)),
      kron_local(diag_local(m.k_diag),
                 q_mat_scale(qp(d * st), q_mat_mul(EiR, diag_local(KtRinv)))));
  QVec bk(dim);
  for (int j = 0; j < dimL; ++j)
    for (int c = 0; c < 3; ++c)
      bk[j * 3 + c] = qi(-s + (m.n_minus + m.n_plus - 3 * j) + wt_i[c] - wt_t[c]);
  ops.tD = q_mat_sub(
      q_mat_sub(q_mat_mul(ops.DBt, ops.DBi), q_mat_scale(qp(d), q_mat_mul(ops.DBi, ops.DBt))),
      diag_local(bk));
  return ops;
}

bool vec_zero(const QVec& v) {
  for (const auto& c : v)
    if (!c.is_zero()) return false;
  return true;
}

QVec vec_scale(const LaurentRational& c, const QVec& v) {
  QVec r = v;
  for (auto& x : r) x *= c;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// q-symbols
// ---------------------------------------------------------------------------

TEST_CASE("q-symbols: defining identities and frozen values") {
  CHECK(qi(0).is_zero());
  CHECK(qi(1).is_one());
  CHECK(qi(2) == qp(1) + qp(-1));
  for (long long n = 1; n <= 7; ++n) CHECK(qi(-n) == -qi(n));
  CHECK(br(0) == li(2));
  CHECK(br(3) == qp(3) + qp(-3));
  CHECK(br(-3) == br(3));
  // [n] over q_i = q^d is [n] with q -> q^d
  CHECK(q_symbols("qint", {2, 2}) == qp(2) + qp(-2));
  CHECK(q_symbols("qint", {3, 2}) == qp(4) + li(1) + qp(-4));
  CHECK(q_symbols("brace", {2, 3}) == qp(6) + qp(-6));
  // factorials
  CHECK(q_symbols("qfact", {0}).is_one());
  CHECK(q_symbols("qfact", {3}) == qi(1) * qi(2) * qi(3));
  // the value of the divided bracket on a weight vector
  CHECK(q_symbols("bracket_k", {-1, 4}) == qi(3));
  CHECK(q_symbols("bracket_k", {2, -5, 2}) == q_symbols("qint", {-3, 2}));
  // frozen binomial
  CHECK(q_symbols("qbinom", {4, 2}) ==
        qp(4) + qp(2) + li(2) + qp(-2) + qp(-4));
  // symmetric and bar-invariant
  for (long long mth = 0; mth <= 6; ++mth)
    for (long long k = 0; k <= mth; ++k) {
      const LaurentRational b = q_symbols("qbinom", {mth, k});
      CHECK(b == q_symbols("qbinom", {mth, mth - k}));
      CHECK(b == b.mirror());
      CHECK(b.is_laurent_polynomial());
    }
}

TEST_CASE("q-binomials satisfy the q-Pascal recursion") {
  // independent recursion: [m k] = q^k [m-1 k] + q^{k-m} [m-1 k-1]
  std::map<std::pair<long long, long long>, LaurentRational> table;
  for (long long m = 0; m <= 8; ++m)
    for (long long k = 0; k <= m; ++k) {
      LaurentRational v;
      if (k == 0 || k == m) {
        v = li(1);
      } else {
        v = qp(k) * table[{m - 1, k}] + qp(k - m) * table[{m - 1, k - 1}];
      }
      table[{m, k}] = v;
      CHECK(v == q_symbols("qbinom", {m, k}));
    }
}

// ---------------------------------------------------------------------------
// LaurentRational
// ---------------------------------------------------------------------------

TEST_CASE("Laurent rationals: normal form and arithmetic") {
  const LaurentPoly q2m1 = LaurentPoly::monomial(1, 2) - LaurentPoly::monomial(1, 0);
  const LaurentPoly qm1 = LaurentPoly::monomial(1, 1) - LaurentPoly::monomial(1, 0);
  const LaurentRational red(q2m1, qm1);
  CHECK(red == qp(1) + li(1));
  CHECK(red.is_laurent_polynomial());
  CHECK(red.str() == "q + 1");

  // monomial denominators are absorbed
  const LaurentRational shift(q2m1, LaurentPoly::monomial(1, 1));
  CHECK(shift == qp(1) - qp(-1));

  // quotients of quantum integers
  CHECK(qi(6) / qi(3) == br(3));
  CHECK(qi(6) / qi(2) == q_symbols("qint", {3, 2}));
  CHECK(q_arith(qi(4), '*', qi(3)) == qi(3) * qi(4));
  CHECK(q_arith(qi(4), '-', qi(4)).is_zero());
  CHECK(q_arith(li(1), '/', br(1)) * br(1) == li(1));

  // cancellation keeps integer prefactors intact
  CHECK(li(2) * (qp(2) - li(1)) / (qp(1) - li(1)) == li(2) * (qp(1) + li(1)));
  CHECK((li(3) * br(2) * qi(4)) / (li(2) * qi(4)) == li(3) * br(2) / li(2));

  // integer contents stay coprime
  const LaurentRational r = li(6) / li(4);
  CHECK(r.num() == LaurentPoly::monomial(3, 0));
  CHECK(r.den() == LaurentPoly::monomial(2, 0));
  CHECK((li(-3)).str() == "-3");

  // powers
  CHECK((qp(1) + li(1)).pow(2) == qp(2) + li(2) * qp(1) + li(1));
  CHECK(qp(-3) * qp(3) == li(1));
  CHECK(br(2).pow(-1) * br(2) == li(1));
  CHECK(li(7).pow(0) == li(1));
}

TEST_CASE("Laurent rationals: behaviour at q = infinity") {
  CHECK(qi(5).degree() == 4);
  CHECK(qi(5).leading_coeff() == BigRat(1));
  CHECK((li(1) / (qp(1) - li(1))).degree() == -1);
  CHECK((li(1) / (qp(1) - li(1))).eval_at_infinity() == BigRat(0));
  CHECK(((qp(1) + li(1)) / (qp(1) - li(1))).degree() == 0);
  CHECK(((qp(1) + li(1)) / (qp(1) - li(1))).eval_at_infinity() == BigRat(1));
  CHECK(((li(3) * qp(2) + li(1)) / (li(2) * qp(2))).eval_at_infinity() == BigRat(3, 2));
  CHECK(qi(3).regular_at_infinity() == false);
  CHECK(LaurentRational().regular_at_infinity());
  CHECK(LaurentRational().eval_at_infinity() == BigRat(0));
  CHECK(qi(4).mirror() == qi(4));
  CHECK(qp(3).mirror() == qp(-3));
  CHECK_THROWS_AS((void)LaurentRational().degree(), std::runtime_error);
  CHECK_THROWS_AS((void)qi(3).eval_at_infinity(), std::runtime_error);
  CHECK_THROWS_AS((void)(li(1) / br(1)).as_laurent_polynomial(), std::runtime_error);
}

TEST_CASE("q arithmetic and symbol errors") {
  CHECK_THROWS_AS((void)q_arith(li(1), '%', li(1)), std::invalid_argument);
  CHECK_THROWS_AS((void)q_arith(li(1), '/', LaurentRational()), std::runtime_error);
  CHECK_THROWS_AS((void)LaurentRational(LaurentPoly::monomial(1, 0), LaurentPoly::zero()),
                  std::runtime_error);
  CHECK_THROWS_AS((void)q_symbols("qbinom", {2, 5}), std::invalid_argument);
  CHECK_THROWS_AS((void)q_symbols("qfact", {-1}), std::invalid_argument);
  CHECK_THROWS_AS((void)q_symbols("nope", {}), std::invalid_argument);
  CHECK_THROWS_AS((void)q_symbols("qint", {1, 1, 1}), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Module construction
// ---------------------------------------------------------------------------

TEST_CASE("module construction: dimensions, actions, and derived entries") {
  // one-dimensional fixed-node module
  const RankTwoModule f = build_rank_two_module(2, {{"n", 3}, {"s", 2}});
  CHECK(f.dim == 1);
  CHECK(f.Bi[0][0] == qi(3));
  CHECK(f.k_diag[0].is_one());

  // disconnected-pair module: string with the familiar raising coefficients
  const RankTwoModule z = build_rank_two_module(0, {{"n", 4}});
  CHECK(z.dim == 5);
  CHECK(z.Bi[1][0].is_one());
  CHECK(z.Bi[2][1] == qi(2));
  CHECK(z.Btau[3][4] == qi(1));
  CHECK(z.Btau[0][1] == qi(4));
  CHECK(z.k_diag[0] == qp(4));
  CHECK(z.k_diag[4] == qp(-4));
  CHECK(z.t.empty());

  // adjacent-pair module: the down action carries the product coefficient
  const RankTwoModule m = build_rank_two_module(-1, {{"n_minus", 3}, {"n_plus", 2}, {"s", 1}});
  CHECK(m.dim == 4);
  CHECK(m.s_tau == 0);
  CHECK(m.Bi[1][0].is_one());
  CHECK(m.Bi[3][2] == qi(3));
  CHECK(m.Btau[0][1] == qi(3) * br(2 - 1));
  CHECK(m.Btau[1][2] == qi(2) * br(2 - 1 - 1));
  CHECK(m.k_diag[0] == qp(5));
  CHECK(m.k_diag[3] == qp(-4));
  CHECK_FALSE(m.t.empty());
  CHECK(m.t[0][0] == qi(3 - 2 + 1));
  CHECK(m.t[1][0].is_zero());
  CHECK(m.gram[0].is_one());

  // every relation is re-verified at construction across a parameter sweep
  for (long long nm = 0; nm <= 5; ++nm)
    for (long long dn = -4; dn <= 4; ++dn)
      for (long long s : {0LL, 1LL, 2LL, -1LL})
        CHECK_NOTHROW(build_rank_two_module(
            -1, {{"n_minus", nm}, {"n_plus", dn + s}, {"s", s}}));
  for (long long n = 0; n <= 6; ++n) {
    CHECK_NOTHROW(build_rank_two_module(0, {{"n", n}}));
    for (long long s : {0LL, 2LL, -3LL})
      CHECK_NOTHROW(build_rank_two_module(2, {{"n", n}, {"s", s}}));
  }
  // scaled q_i = q^d
  const RankTwoModule md = build_rank_two_module(-1, {{"n_minus", 2}, {"n_plus", 1}, {"s", 0}, {"d", 2}});
  CHECK(md.Btau[0][1] == q_symbols("qint", {2, 2}) * q_symbols("brace", {1, 2}));
}

TEST_CASE("module construction: parameter errors") {
  CHECK_THROWS_AS((void)build_rank_two_module(1, {}), std::invalid_argument);
  CHECK_THROWS_AS((void)build_rank_two_module(-1, {{"n_minus", 2}, {"n_plus", 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)build_rank_two_module(-1, {{"n_minus", -1}, {"n_plus", 0}, {"s", 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)build_rank_two_module(0, {{"n", -2}}), std::invalid_argument);
  CHECK_THROWS_AS((void)build_rank_two_module(0, {{"n", 2}, {"bogus", 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)module_norms(build_rank_two_module(0, {{"n", 2}})),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

TEST_CASE("norms: recursion equals closed form with the expected leading terms") {
  for (long long nm = 0; nm <= 6; ++nm)
    for (long long dn = -4; dn <= nm + 2; ++dn)
      for (long long s : {0LL, 1LL}) {
        CAPTURE(nm);
        CAPTURE(dn);
        CAPTURE(s);
        const RankTwoModule m =
            build_rank_two_module(-1, {{"n_minus", nm}, {"n_plus", dn + s}, {"s", s}});
        const std::vector<NormData> norms = module_norms(m);
        REQUIRE(static_cast<long long>(norms.size()) == nm + 1);
        CHECK(norms[0].norm_closed.is_one());
        for (long long k = 0; k <= nm; ++k) {
          CAPTURE(k);
          CHECK(norms[k].norm_recursive == norms[k].norm_closed);
          CHECK(norms[k].norm_closed == m.gram[k]);
          // leading-term table, by the position of dn = n_plus - s relative
          // to the chain
          Sqrt2Scalar want_coeff = Sqrt2Scalar::one();
          long long want_half = 0;
          if (dn >= nm || (dn > -1 && k <= dn)) {
            // unit leading term
          } else if (dn > -1) {
            want_coeff = Sqrt2Scalar::sqrt2();
            want_half = (k - dn - 1) * (k - dn);
          } else {
            want_half = k * (k - 2 * dn - 1);
          }
          CHECK(norms[k].lt.coeff == want_coeff);
          CHECK(norms[k].lt.q_half_exponent == want_half);
        }
      }
}

// ---------------------------------------------------------------------------
// sl2 spectrum of the node generator
// ---------------------------------------------------------------------------

namespace {

std::vector<long long> expected_spectrum(long long n, long long s) {
  const long long as = s < 0 ? -s : s;
  const long long sg = s < 0 ? -1 : 1;
  std::vector<long long> out;
  if (n < as) {
    for (long long l = 0; l <= n; ++l) out.push_back(sg * (as - n + 2 * l));
  } else {
    if ((n - as) % 2 == 0) {
      out.push_back(0);
      for (long long l = 1; l <= (n - as) / 2; ++l) {
        out.push_back(2 * l);
        out.push_back(-2 * l);
      }
    } else {
      for (long long l = 1; l <= (n - as + 1) / 2; ++l) {
        out.push_back(2 * l - 1);
        out.push_back(-(2 * l - 1));
      }
    }
    for (long long l = n - as + 1; l <= n; ++l) out.push_back(sg * (as - n + 2 * l));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("sl2 strings: the node generator has an integral bracket spectrum") {
  for (long long n = 0; n <= 5; ++n)
    for (long long s : {0LL, 1LL, -1LL, 2LL, -2LL, 3LL, -3LL, 4LL, -5LL}) {
      CAPTURE(n);
      CAPTURE(s);
      CHECK(sl2_b_eigenvalue_integers(n, s) == expected_spectrum(n, s));
    }
  // the integer list is scale invariant
  CHECK(sl2_b_eigenvalue_integers(4, 2, 2) == sl2_b_eigenvalue_integers(4, 2, 1));
  CHECK_THROWS_AS((void)sl2_b_eigenvalue_integers(-1, 0), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Explicit highest-weight vectors in the natural tensor product
// ---------------------------------------------------------------------------

TEST_CASE("natural tensor: explicit highest-weight vectors and expansions") {
  // (n_minus, n_plus, s) = (2, 3, 0); pure tensors are indexed 3j + c
  const RankTwoModule m = build_rank_two_module(-1, {{"n_minus", 2}, {"n_plus", 3}, {"s", 0}});
  const TensorOps ops = natural_tensor_ops(m);
  REQUIRE(ops.dim == 9);
  const long long nm = 2, dn = 3;

  QVec vp0(9), v0p(9), vmm(9);
  vp0[0] = li(1);
  vp0[2] = qp(nm - dn);
  v0p[0] = li(1);
  v0p[2] = -qp(dn - nm);
  vmm[3] = li(1);
  vmm[5] = qp(-nm - dn - 1);
  vmm[1] = -qp(-nm - dn) * qi(nm) * br(dn);

  // all three are killed by the raising generator
  CHECK(vec_zero(q_mat_apply(ops.DBt, vp0)));
  CHECK(vec_zero(q_mat_apply(ops.DBt, v0p)));
  CHECK(vec_zero(q_mat_apply(ops.DBt, vmm)));

  // and separated by the central element
  CHECK(q_mat_apply(ops.tD, vp0) == vec_scale(qi((nm + 1) - dn), vp0));
  CHECK(q_mat_apply(ops.tD, v0p) == vec_scale(qi(nm - (dn + 1)), v0p));
  CHECK(q_mat_apply(ops.tD, vmm) == vec_scale(qi((nm - 1) - (dn - 1)), vmm));

  // divided powers expand with the frozen coefficients
  QVec want1(9);
  want1[3] = qp(-1);
  want1[5] = qp(nm - dn);
  want1[1] = qp(-dn) * br(dn);
  CHECK(q_mat_apply(ops.DBi, vp0) == want1);

  QVec want2(9);
  want2[6] = qp(-2);
  want2[8] = qp(nm - dn);
  want2[4] = qp(-dn + 1) * br(dn - 1);
  const QVec bi2 = vec_scale(li(1) / qi(2), q_mat_apply(ops.DBi, q_mat_apply(ops.DBi, vp0)));
  CHECK(bi2 == want2);

  QVec want1b(9);
  want1b[3] = qp(-1);
  want1b[5] = -qp(dn - nm);
  want1b[1] = li(1) - qp(-2 * nm);
  CHECK(q_mat_apply(ops.DBi, v0p) == want1b);

  QVec want1c(9);
  want1c[6] = qp(-1) * qi(2);
  want1c[8] = qp(-nm - dn - 1) * qi(2);
  want1c[4] = -qp(-nm - dn + 1) * qi(nm - 1) * br(dn - 1);
  CHECK(q_mat_apply(ops.DBi, vmm) == want1c);
}

TEST_CASE("natural tensor: chainless head when n_minus = 0") {
  const RankTwoModule m = build_rank_two_module(-1, {{"n_minus", 0}, {"n_plus", 2}, {"s", 0}});
  const TensorOps ops = natural_tensor_ops(m);
  const long long dn = 2;
  QVec vp0(3), v0p(3);
  vp0[0] = li(1);
  vp0[2] = qp(-dn);
  v0p[0] = li(1);
  v0p[2] = -qp(dn);
  CHECK(vec_zero(q_mat_apply(ops.DBt, vp0)));
  CHECK(vec_zero(q_mat_apply(ops.DBt, v0p)));
  QVec want(3);
  want[1] = qp(-dn) * br(dn);
  CHECK(q_mat_apply(ops.DBi, vp0) == want);
}

// ---------------------------------------------------------------------------
// Oracle vs the combinatorial tensor rule
// ---------------------------------------------------------------------------

TEST_CASE("oracle equals the combinatorial rule: rank-one fixed node") {
  for (long long n = -4; n <= 5; ++n)
    for (long long s : {0LL, 1LL, -2LL, 3LL}) {
      CAPTURE(n);
      CAPTURE(s);
      const CartanSatakeDatum d = a1(s);
      const ICrystalGraph want = tensor_icrystal_crystal(
          make_builtin_icrystal(d, "bi_rank1", {{"n", n}}),
          make_crystal(d, "B_n_rank1", {1}));
      const ICrystalGraph got =
          oracle_crystal_limit(build_rank_two_module(2, {{"n", n}, {"s", s}}));
      CHECK(structure_diff(got, want) == "");
    }
}

TEST_CASE("oracle equals the combinatorial rule: disconnected pair") {
  const CartanSatakeDatum d = a1xa1();
  const CrystalGraph right = make_crystal(d, "node_string", {1, 1});
  for (long long n = 0; n <= 5; ++n) {
    CAPTURE(n);
    const ICrystalGraph want =
        tensor_icrystal_crystal(make_builtin_icrystal(d, "bi_a0", {{"n", n}}), right);
    const ICrystalGraph got = oracle_crystal_limit(build_rank_two_module(0, {{"n", n}}));
    CHECK(structure_diff(got, want) == "");
  }
}

TEST_CASE("oracle equals the combinatorial rule: adjacent pair sweep") {
  for (long long s : {0LL, 1LL}) {
    const CartanSatakeDatum d = a2flip(s);
    const CrystalGraph right = make_crystal(d, "natural_A", {});
    for (long long nm = 0; nm <= 5; ++nm)
      for (long long dn = -4; dn <= 4; ++dn) {
        CAPTURE(s);
        CAPTURE(nm);
        CAPTURE(dn);
        const ICrystalGraph want = tensor_icrystal_crystal(
            make_builtin_icrystal(d, "bi", {{"n_minus", nm}, {"n_plus", dn + s}}), right);
        const ICrystalGraph got = oracle_crystal_limit(build_rank_two_module(
            -1, {{"n_minus", nm}, {"n_plus", dn + s}, {"s", s}}));
        CHECK(structure_diff(got, want) == "");
      }
  }
}

TEST_CASE("oracle: the five adjacent-pair shapes appear with exact amplitudes") {
  // representatives: dn > nm, dn = nm (junction), 0 <= dn < nm, dn = -1
  // (wedge), dn < -1 (plain)
  const auto limit = [](long long nm, long long dn) {
    return oracle_crystal_limit(
        build_rank_two_module(-1, {{"n_minus", nm}, {"n_plus", dn}, {"s", 0}}));
  };
  const auto count_amp = [](const ICrystalGraph& g, int node, const Sqrt2Scalar& z) {
    int c = 0;
    for (const auto& row : g.btil[static_cast<size_t>(node)])
      for (const auto& [dst, amp] : row)
        if (amp == z) ++c;
    return c;
  };
  const Sqrt2Scalar half_amp = Sqrt2Scalar::inv_sqrt2();

  // the junction shape (dn = nm) carries exactly two 1/sqrt(2) arrows per
  // node, and so does the wedge shape (dn = -1) through its dn' = 0 component
  for (const auto& [nm, dn] :
       std::vector<std::pair<long long, long long>>{{2, 2}, {2, -1}}) {
    CAPTURE(nm);
    CAPTURE(dn);
    const ICrystalGraph g = limit(nm, dn);
    CHECK(count_amp(g, 0, half_amp) == 2);
    CHECK(count_amp(g, 1, half_amp) == 2);
    CHECK(check_icrystal_axioms(g).pass());
  }

  // the other three shapes have no amplitude off the unit circle
  for (const auto& [nm, dn] :
       std::vector<std::pair<long long, long long>>{{2, 3}, {3, 1}, {2, -3}}) {
    CAPTURE(nm);
    CAPTURE(dn);
    const ICrystalGraph g = limit(nm, dn);
    CHECK(count_amp(g, 0, half_amp) == 0);
    CHECK(count_amp(g, 1, half_amp) == 0);
    CHECK(check_icrystal_axioms(g).pass());
  }
}

TEST_CASE("oracle output is well formed and serializes round-trip") {
  const std::vector<ICrystalGraph> graphs = {
      oracle_crystal_limit(build_rank_two_module(2, {{"n", 3}, {"s", 2}})),
      oracle_crystal_limit(build_rank_two_module(0, {{"n", 3}})),
      oracle_crystal_limit(build_rank_two_module(-1, {{"n_minus", 3}, {"n_plus", 2}, {"s", 1}})),
  };
  for (const ICrystalGraph& g : graphs) {
    const CheckReport rep = check_icrystal_axioms(g);
    CAPTURE(rep.str());
    CHECK(rep.pass());
    const std::string text = icrystal_to_json_text(g);
    const ICrystalGraph back = icrystal_from_json_text(text);
    CHECK(structure_diff(g, back) == "");
    CHECK(icrystal_to_json_text(back) == text);
  }
  CHECK_THROWS_AS(
      (void)oracle_crystal_limit(build_rank_two_module(0, {{"n", 1}, {"d", 2}})),
      std::invalid_argument);
}
