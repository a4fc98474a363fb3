#include "icrys/scalars.hpp"

#include <cmath>

namespace icrys {

namespace {
long long pow2ll(int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) r *= 2;
  return r;
}
}  // namespace

Sqrt2Scalar::Sqrt2Scalar(long long a_, long long b_, int k_) : a(a_), b(b_), k(k_) {
  if (k < 0) throw std::invalid_argument("Sqrt2Scalar: negative denominator exponent");
  if (a == 0 && b == 0) {
    k = 0;
    return;
  }
  while (k > 0 && a % 2 == 0 && b % 2 == 0) {
    a /= 2;
    b /= 2;
    --k;
  }
}

Sqrt2Scalar Sqrt2Scalar::operator+(const Sqrt2Scalar& o) const {
  int kk = std::max(k, o.k);
  long long sa = a * pow2ll(kk - k) + o.a * pow2ll(kk - o.k);
  long long sb = b * pow2ll(kk - k) + o.b * pow2ll(kk - o.k);
  return Sqrt2Scalar(sa, sb, kk);
}

Sqrt2Scalar Sqrt2Scalar::operator-() const {
  Sqrt2Scalar r;
  r.a = -a;
  r.b = -b;
  r.k = k;
  return r;
}

Sqrt2Scalar Sqrt2Scalar::operator-(const Sqrt2Scalar& o) const { return *this + (-o); }

Sqrt2Scalar Sqrt2Scalar::operator*(const Sqrt2Scalar& o) const {
  // (a1 + b1 s)(a2 + b2 s) with s^2 = 2.
  long long pa = a * o.a + 2 * b * o.b;
  long long pb = a * o.b + b * o.a;
  return Sqrt2Scalar(pa, pb, k + o.k);
}

double Sqrt2Scalar::value() const {
  return (static_cast<double>(a) + static_cast<double>(b) * std::sqrt(2.0)) /
         static_cast<double>(pow2ll(k));
}

std::string Sqrt2Scalar::str() const {
  if (is_zero()) return "0";
  const long long den = pow2ll(k);
  auto rational = [&](long long num) {
    std::string s = std::to_string(num);
    if (k > 0) s += "/" + std::to_string(den);
    return s;
  };
  if (b == 0) return rational(a);
  if (a == 0) {
    // b*sqrt(2)/2^k; prefer 1/sqrt(2)-style rendering when b/2^k = 1/2 * unit.
    if (k == 1 && (b == 1 || b == -1)) return b == 1 ? "1/sqrt(2)" : "-1/sqrt(2)";
    std::string coef;
    if (b == 1) coef = "";
    else if (b == -1) coef = "-";
    else coef = std::to_string(b) + "*";
    std::string s = coef + "sqrt(2)";
    if (k > 0) s += "/" + std::to_string(den);
    return s;
  }
  // mixed: (a+b*sqrt(2))/2^k
  std::string sb;
  if (b == 1) sb = "+sqrt(2)";
  else if (b == -1) sb = "-sqrt(2)";
  else if (b > 0) sb = "+" + std::to_string(b) + "*sqrt(2)";
  else sb = std::to_string(b) + "*sqrt(2)";
  std::string s = "(" + std::to_string(a) + sb + ")";
  if (k > 0) s += "/" + std::to_string(den);
  return s;
}

bool ilt(const IExtInt& x, const IExtInt& y) {
  auto cls = [](const IExtInt& z) -> int {
    switch (z.kind) {
      case IKind::NegInf: return 0;
      case IKind::NegInfEv:
      case IKind::NegInfOdd: return 1;
      case IKind::Fin: return 2;
    }
    throw std::logic_error("unreachable");
  };
  int cx = cls(x), cy = cls(y);
  if (cx == 1 && cy == 1) {
    if (x.kind != y.kind)
      throw std::runtime_error(
          "IExtInt: ordering -inf_ev against -inf_odd is undefined");
    return false;
  }
  if (cx != cy) return cx < cy;
  if (cx == 2) return x.v < y.v;
  return false;  // both plain -inf, or both the same parity symbol
}

}  // namespace icrys
