#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "icrys/icrystal.hpp"
#include "icrys/scalars.hpp"

namespace icrys {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// LaurentPoly: integer-coefficient Laurent polynomial in q, stored as
//   coeff[0] q^{lo} + coeff[1] q^{lo+1} + ... + coeff.back() q^{hi}.
// Normal form: coeff is empty (the zero polynomial, with lo == 0) or has
// nonzero first and last entries.
// ---------------------------------------------------------------------------
struct LaurentPoly {
  long long lo = 0;
  std::vector<BigInt> coeff;

  bool is_zero() const { return coeff.empty(); }
  long long hi() const { return lo + static_cast<long long>(coeff.size()) - 1; }
  BigInt at(long long e) const;  // coefficient of q^e

  static LaurentPoly zero() { return {}; }
  static LaurentPoly monomial(BigInt c, long long e);

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator-() const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  bool operator==(const LaurentPoly& o) const = default;

  LaurentPoly mirror() const;  // q -> q^{-1}
  std::string str() const;
};

// ---------------------------------------------------------------------------
// LaurentRational: quotient num/den of integer-coefficient Laurent
// polynomials, kept in a unique normal form:
//   * den is an ordinary polynomial (den.lo == 0) with nonzero constant
//     term, positive leading coefficient, and content 1;
//   * num and den share no nonconstant polynomial factor, and the integer
//     contents of num and den are coprime.
// All arithmetic is exact.  The behaviour of the value as q -> infinity is
// read off from degree() (top exponent) and leading_coeff().
// ---------------------------------------------------------------------------
class LaurentRational {
 public:
  LaurentRational();  // zero
  LaurentRational(LaurentPoly n, LaurentPoly d);

  static LaurentRational integer(long long v);
  static LaurentRational of_big(const BigInt& v);
  static LaurentRational of_rational(const BigRat& v);
  static LaurentRational q_power(long long e);                  // q^e
  static LaurentRational monomial(const BigInt& c, long long e);  // c q^e
  static LaurentRational of_poly(LaurentPoly p);

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;

  LaurentRational operator+(const LaurentRational& o) const;
  LaurentRational operator-(const LaurentRational& o) const;
  LaurentRational operator-() const;
  LaurentRational operator*(const LaurentRational& o) const;
  LaurentRational operator/(const LaurentRational& o) const;  // throws on /0
  LaurentRational& operator+=(const LaurentRational& o);
  LaurentRational& operator-=(const LaurentRational& o);
  LaurentRational& operator*=(const LaurentRational& o);
  LaurentRational& operator/=(const LaurentRational& o);
  bool operator==(const LaurentRational& o) const = default;

  LaurentRational mirror() const;           // q -> q^{-1}
  LaurentRational pow(long long e) const;   // negative e inverts; 0^0 = 1

  // Behaviour at q -> infinity.  degree() of zero throws.
  long long degree() const;
  BigRat leading_coeff() const;
  bool regular_at_infinity() const;  // zero, or degree() <= 0
  BigRat eval_at_infinity() const;   // throws unless regular

  // When den is a monomial, the value is itself a Laurent polynomial.
  bool is_laurent_polynomial() const;
  LaurentPoly as_laurent_polynomial() const;  // throws otherwise

  std::string str() const;

 private:
  LaurentPoly num_, den_;
  void reduce();
};

// Four-function arithmetic entry point; op is one of '+', '-', '*', '/'.
LaurentRational q_arith(const LaurentRational& x, char op, const LaurentRational& y);

// Standard q-combinatorial values.  The trailing parameter d (default 1)
// works over q_i = q^d throughout:
//   "qint"      {n [, d]}     -> [n]   = (q_i^n - q_i^{-n}) / (q_i - q_i^{-1})
//   "qfact"     {n [, d]}     -> [n]!  (n >= 0)
//   "qbinom"    {m, k [, d]}  -> [m]! / ([k]! [m-k]!)  (0 <= k <= m)
//   "brace"     {a [, d]}     -> {a}   = q_i^a + q_i^{-a}
//   "bracket_k" {a, m [, d]}  -> value of (q_i^a k - q_i^{-a} k^{-1}) / (q_i - q_i^{-1})
//                                on a vector where k acts by q_i^m, i.e. [a+m]
LaurentRational q_symbols(const std::string& kind, const std::vector<long long>& params);

// Dense matrices over LaurentRational (row-major; M[r][c]).
using QVec = std::vector<LaurentRational>;
using QMat = std::vector<QVec>;

QMat q_mat_identity(int n);
QMat q_mat_zero(int rows, int cols);
QMat q_mat_add(const QMat& x, const QMat& y);
QMat q_mat_sub(const QMat& x, const QMat& y);
QMat q_mat_mul(const QMat& x, const QMat& y);
QMat q_mat_scale(const LaurentRational& c, const QMat& x);
QVec q_mat_apply(const QMat& m, const QVec& v);
bool q_mat_is_zero(const QMat& m);

// ---------------------------------------------------------------------------
// RankTwoModule: the small modules over the two-node (or one-node) subalgebra
// generated by B_i, B_{tau(i)} and the invariant torus element k_i, realized
// as exact matrices.  Cases, keyed by the Cartan pairing a between the node
// and its partner:
//   a =  2 : the one-dimensional module with B_i v = [n]_i v.
//   a =  0 : the (n+1)-dimensional module with B_{tau(i)} v_0 = 0,
//            B_i^{(k)} v_0 = v_k, k_i v_0 = q_i^n v_0.
//   a = -1 : the (n_minus+1)-dimensional module with B_{tau(i)} v_0 = 0,
//            B_i^{(k)} v_0 = v_k, k_i v_0 = q_i^{n_minus+n_plus} v_0,
//            t v_0 = [n_minus - n_plus + s_i]_i v_0.
// All defining relations of the corresponding algebra presentation are
// verified symbolically at construction time.
// gram holds the squared norms (v_k, v_k) of the basis for the contragredient
// symmetric form with (v_0, v_0) = 1.
// ---------------------------------------------------------------------------
struct RankTwoModule {
  int a = -1;
  long long d = 1;  // q_i = q^d
  long long s_i = 0;
  long long s_tau = 0;
  long long n = 0;                      // a = 2 or a = 0
  long long n_minus = 0, n_plus = 0;    // a = -1
  int dim = 0;
  QMat Bi, Btau;
  QMat t;        // a = -1 only (empty otherwise)
  QVec k_diag;   // k_i eigenvalues on the basis (a = 2: identically 1)
  QVec gram;     // (v_k, v_k)
};

// params: a_case = 2: {n, s};  a_case = 0: {n};  a_case = -1: {n_minus,
// n_plus, s}.  Optional "d" (default 1).  Throws std::invalid_argument for
// bad parameters and std::runtime_error if any defining relation fails.
RankTwoModule build_rank_two_module(int a_case, const std::map<std::string, long long>& params);

// ---------------------------------------------------------------------------
// Norms of the a = -1 module basis.  The squared norm is computed twice,
// once by the adjunction recursion
//   (v_k, v_k) = q_i^{-n_minus-n_plus+3k+s_i-2}
//                [n_minus-k+1]_i {n_plus-s_i-k+1}_i / [k]_i  * (v_{k-1}, v_{k-1})
// and once by the closed product formula; both are returned.  lt is the
// positive square root of the leading term of the squared norm, a value of
// the form (m or m*sqrt(2)) * q^{q_half_exponent/2}; the exponent is stored
// doubled so that it stays an integer.
// ---------------------------------------------------------------------------
struct NormLeadingTerm {
  Sqrt2Scalar coeff;            // positive; either m or m*sqrt(2)
  long long q_half_exponent = 0;  // lt = coeff * q^{q_half_exponent / 2}
};
struct NormData {
  LaurentRational norm_recursive;
  LaurentRational norm_closed;
  NormLeadingTerm lt;
};
std::vector<NormData> module_norms(const RankTwoModule& m);

// ---------------------------------------------------------------------------
// oracle_crystal_limit: tensor the module with the natural module of its
// ambient quantum group (a = -1: the 3-dimensional module; a = 2 and a = 0:
// the 2-dimensional module at node i), decompose the product into
// highest-weight vectors (the kernel of B_{tau(i)} split along k_i- and
// t-eigenspaces), build the canonical chains, normalize each chain vector by
// the positive square root of its leading squared norm, and reduce the
// normalized shift operators modulo the q^{-1}-lattice spanned by the pure
// tensors.  The result is the limit structure on the pure tensor basis as an
// ICrystalGraph over the matching one- or two-node datum, with exact
// amplitudes.  Throws std::runtime_error("oracle: decomposition failure ...")
// if the product fails to split as expected.
// ---------------------------------------------------------------------------
ICrystalGraph oracle_crystal_limit(const RankTwoModule& m);

// ---------------------------------------------------------------------------
// Spectrum of B_i = F_i + q_i^{-1} E_i K_i^{-1} + [s]_i K_i^{-1} on the
// (n+1)-dimensional irreducible sl2-module: returns the sorted integer list
// (m_0, ..., m_n) with eigenvalue multiset { [m_j]_i }.  The factorization
// prod_j (B_i - [m_j]_i) = 0 is verified symbolically.
// ---------------------------------------------------------------------------
std::vector<long long> sl2_b_eigenvalue_integers(long long n, long long s, long long d = 1);

}  // namespace icrys
