#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace icrys {

// ---------------------------------------------------------------------------
// Sqrt2Scalar: exact element of Z[1/sqrt(2)], stored as (a + b*sqrt(2)) / 2^k.
//
// Normal form: k == 0, or not both a and b even (and a = b = 0 forces k = 0).
// Every value has a unique normal form, so defaulted equality is value
// equality.
// ---------------------------------------------------------------------------
struct Sqrt2Scalar {
  long long a = 0;
  long long b = 0;
  int k = 0;

  Sqrt2Scalar() = default;
  Sqrt2Scalar(long long a_, long long b_, int k_);

  static Sqrt2Scalar zero() { return {}; }
  static Sqrt2Scalar one() { return Sqrt2Scalar(1, 0, 0); }
  static Sqrt2Scalar integer(long long n) { return Sqrt2Scalar(n, 0, 0); }
  static Sqrt2Scalar sqrt2() { return Sqrt2Scalar(0, 1, 0); }
  static Sqrt2Scalar inv_sqrt2() { return Sqrt2Scalar(0, 1, 1); }
  static Sqrt2Scalar half() { return Sqrt2Scalar(1, 0, 1); }

  bool is_zero() const { return a == 0 && b == 0; }
  bool is_one() const { return a == 1 && b == 0 && k == 0; }

  Sqrt2Scalar operator+(const Sqrt2Scalar& o) const;
  Sqrt2Scalar operator-() const;
  Sqrt2Scalar operator-(const Sqrt2Scalar& o) const;
  Sqrt2Scalar operator*(const Sqrt2Scalar& o) const;
  bool operator==(const Sqrt2Scalar& o) const = default;

  // |value|^2 as another Sqrt2Scalar (values are real, so just the square).
  Sqrt2Scalar norm_square() const { return (*this) * (*this); }

  double value() const;
  // Deterministic ASCII rendering, e.g. "1", "-1", "1/2", "sqrt(2)",
  // "1/sqrt(2)", "(1+sqrt(2))/2".
  std::string str() const;
};

// ---------------------------------------------------------------------------
// ExtInt: Z together with -inf.  Addition of integers keeps -inf absorbing.
// ---------------------------------------------------------------------------
struct ExtInt {
  bool finite = true;
  long long v = 0;

  ExtInt() = default;
  ExtInt(long long n) : finite(true), v(n) {}
  static ExtInt neg_inf() {
    ExtInt x;
    x.finite = false;
    x.v = 0;
    return x;
  }
  bool is_neg_inf() const { return !finite; }

  bool operator==(const ExtInt& o) const {
    return finite == o.finite && (!finite || v == o.v);
  }
  bool operator<(const ExtInt& o) const {
    if (!finite) return o.finite;  // -inf < finite; -inf < -inf is false
    if (!o.finite) return false;
    return v < o.v;
  }
  bool operator<=(const ExtInt& o) const { return *this < o || *this == o; }
  bool operator>(const ExtInt& o) const { return o < *this; }
  bool operator>=(const ExtInt& o) const { return o <= *this; }

  ExtInt operator+(long long n) const {
    return finite ? ExtInt(v + n) : neg_inf();
  }
  ExtInt operator-(long long n) const { return *this + (-n); }

  long long get() const {
    if (!finite) throw std::runtime_error("ExtInt: -inf has no integer value");
    return v;
  }
  std::string str() const { return finite ? std::to_string(v) : "-inf"; }
};

inline ExtInt ext_max(const ExtInt& x, const ExtInt& y) { return x < y ? y : x; }

// ---------------------------------------------------------------------------
// IExtInt: Z together with -inf, -inf_ev, -inf_odd.
//
//  * adding an integer a to -inf_ev/-inf_odd flips the parity subscript iff a
//    is odd; plain -inf absorbs everything;
//  * parity: ol(n) = n mod 2, ol(-inf_ev) = 0, ol(-inf_odd) = 1, and plain
//    -inf has no parity (error);
//  * ordering: -inf < -inf_ev, -inf_odd < n for every integer n.  Ordering
//    -inf_ev against -inf_odd is undefined and raises an error; structural
//    equality between them is fine (they are simply unequal).
// ---------------------------------------------------------------------------
enum class IKind : std::uint8_t { NegInf = 0, NegInfEv = 1, NegInfOdd = 2, Fin = 3 };

struct IExtInt {
  IKind kind = IKind::Fin;
  long long v = 0;

  IExtInt() = default;
  IExtInt(long long n) : kind(IKind::Fin), v(n) {}
  static IExtInt neg_inf() { return make(IKind::NegInf); }
  static IExtInt neg_inf_ev() { return make(IKind::NegInfEv); }
  static IExtInt neg_inf_odd() { return make(IKind::NegInfOdd); }
  static IExtInt from_ext(const ExtInt& e) {
    return e.finite ? IExtInt(e.v) : neg_inf();
  }

  bool finite() const { return kind == IKind::Fin; }
  long long get() const {
    if (!finite()) throw std::runtime_error("IExtInt: no integer value");
    return v;
  }

  IExtInt operator+(long long n) const {
    switch (kind) {
      case IKind::Fin: return IExtInt(v + n);
      case IKind::NegInf: return neg_inf();
      case IKind::NegInfEv: return (n % 2 != 0) ? neg_inf_odd() : neg_inf_ev();
      case IKind::NegInfOdd: return (n % 2 != 0) ? neg_inf_ev() : neg_inf_odd();
    }
    throw std::logic_error("unreachable");
  }
  IExtInt operator-(long long n) const { return *this + (-n); }

  // parity in {0,1}
  int parity() const {
    switch (kind) {
      case IKind::Fin: return static_cast<int>(((v % 2) + 2) % 2);
      case IKind::NegInfEv: return 0;
      case IKind::NegInfOdd: return 1;
      case IKind::NegInf:
        throw std::runtime_error("IExtInt: -inf has no parity");
    }
    throw std::logic_error("unreachable");
  }

  bool operator==(const IExtInt& o) const {
    return kind == o.kind && (kind != IKind::Fin || v == o.v);
  }

  std::string str() const {
    switch (kind) {
      case IKind::Fin: return std::to_string(v);
      case IKind::NegInf: return "-inf";
      case IKind::NegInfEv: return "-inf_ev";
      case IKind::NegInfOdd: return "-inf_odd";
    }
    throw std::logic_error("unreachable");
  }

 private:
  static IExtInt make(IKind k) {
    IExtInt x;
    x.kind = k;
    x.v = 0;
    return x;
  }
};

// Strict order with the conventions above; comparing -inf_ev against
// -inf_odd is rejected.
bool ilt(const IExtInt& x, const IExtInt& y);
inline bool ile(const IExtInt& x, const IExtInt& y) { return x == y || ilt(x, y); }
inline bool igt(const IExtInt& x, const IExtInt& y) { return ilt(y, x); }
inline bool ige(const IExtInt& x, const IExtInt& y) { return ile(y, x); }
inline IExtInt imax(const IExtInt& x, const IExtInt& y) { return ilt(x, y) ? y : x; }
inline IExtInt imax(const IExtInt& x, const IExtInt& y, const IExtInt& z) {
  return imax(imax(x, y), z);
}

}  // namespace icrys
