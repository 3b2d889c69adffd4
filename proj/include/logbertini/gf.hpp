#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logbertini/numeric.hpp"

namespace logbertini {

// The finite field F_{p^m}.
//
// The modulus is pinned so that reports are reproducible across runs: it is
// the monic irreducible x^m + c_{m-1}x^{m-1} + ... + c_0 whose coefficient
// tuple (c_{m-1}, ..., c_0) is lexicographically smallest, equivalently the
// first irreducible candidate in the integer order N = sum c_i p^i.
//
// Elements are packed indices: the residue class sum c_i x^i is stored as the
// integer sum c_i p^i, so 0 is zero, 1 is one, and enumeration is a plain
// index loop. Multiplicative structure runs on exp/log tables over the
// smallest primitive element; additive structure works digit by digit.
class GF {
 public:
  using Elem = std::uint32_t;

  GF(long p, long m) : p_(p), m_(m) {
    if (p < 2 || !is_prime(p)) throw config_error("GF: p must be prime");
    if (m < 1) throw config_error("GF: extension degree must be positive");
    q_ = 1;
    for (long i = 0; i < m; ++i) {
      q_ *= p;
      if (q_ > (1L << 21)) throw resource_error("GF: field order exceeds 2^21");
    }
    pow_p_.resize(m + 1);
    pow_p_[0] = 1;
    for (long i = 0; i < m; ++i) pow_p_[i + 1] = pow_p_[i] * p;
    find_modpoly();
    build_reduction_rows();
    build_tables();
  }

  long p() const { return p_; }
  long degree() const { return m_; }
  long order() const { return q_; }
  Int characteristic() const { return p_; }

  // non-leading coefficients c_0..c_{m-1} of the monic modulus
  const std::vector<long>& modulus() const { return modpoly_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }

  Elem from_int(const Int& k) const {
    Int r = k % p_;
    if (r < 0) r += p_;
    return static_cast<Elem>(static_cast<long>(r));
  }

  Elem add(Elem a, Elem b) const {
    Elem out = 0;
    for (long i = 0; i < m_; ++i) {
      long d = (digit(a, i) + digit(b, i)) % p_;
      out += static_cast<Elem>(d * pow_p_[i]);
    }
    return out;
  }

  Elem neg(Elem a) const {
    Elem out = 0;
    for (long i = 0; i < m_; ++i) {
      long d = (p_ - digit(a, i)) % p_;
      out += static_cast<Elem>(d * pow_p_[i]);
    }
    return out;
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    long e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }

  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("GF: inverse of zero");
    long e = log_[a] == 0 ? 0 : q_ - 1 - log_[a];
    return exp_[e];
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, const Int& e) const {
    if (a == 0) {
      if (e > 0) return 0;
      if (e == 0) return 1;
      throw std::domain_error("GF: negative power of zero");
    }
    Int r = e % (q_ - 1);
    if (r < 0) r += q_ - 1;
    long k = static_cast<long>(r);
    long idx = static_cast<long>((static_cast<long long>(log_[a]) * k) % (q_ - 1));
    return exp_[idx];
  }

  // Smallest n-th root when one exists. On the cyclic group of order q-1 the
  // image of x -> x^n has index gcd(n, q-1), so existence is the single test
  // u^((q-1)/gcd(n, q-1)) = 1; this covers the p-part of n for free since
  // Frobenius is bijective on a finite field.
  std::optional<Elem> nth_root(Elem u, const Int& n) const {
    if (n <= 0) throw config_error("GF: root order must be positive");
    if (u == 0) return Elem(0);
    Int g = int_gcd(n, Int(q_ - 1));
    if (pow(u, Int(q_ - 1) / g) != one()) return std::nullopt;
    for (long v = 1; v < q_; ++v)
      if (pow(static_cast<Elem>(v), n) == u) return static_cast<Elem>(v);
    throw std::logic_error("GF: root predicted but not found");
  }

  std::vector<long> digits(Elem a) const {
    std::vector<long> d(m_);
    for (long i = 0; i < m_; ++i) d[i] = digit(a, i);
    return d;
  }

  Elem from_digits(const std::vector<long>& d) const {
    if (static_cast<long>(d.size()) > m_) throw config_error("GF: too many digits");
    Elem out = 0;
    for (size_t i = 0; i < d.size(); ++i) {
      long c = d[i] % p_;
      if (c < 0) c += p_;
      out += static_cast<Elem>(c * pow_p_[i]);
    }
    return out;
  }

  std::string to_string(Elem a) const {
    if (m_ == 1) return std::to_string(static_cast<long>(a));
    std::string s = "(";
    for (long i = 0; i < m_; ++i) {
      if (i) s += ",";
      s += std::to_string(digit(a, i));
    }
    return s + ")";
  }

  // Evaluate this field's modulus at a point of a bigger field E (same p,
  // degree a multiple of m_); the smallest root anchors the embedding.
  template <class E>
  typename E::Elem embedding_root(const E& big) const {
    if (big.p() != p_ || big.degree() % m_ != 0)
      throw config_error("GF: no embedding between these fields");
    for (long r = 0; r < big.order(); ++r) {
      typename E::Elem x = static_cast<typename E::Elem>(r);
      typename E::Elem acc = big.one();  // monic leading term
      for (long i = m_ - 1; i >= 0; --i)
        acc = big.add(big.mul(acc, x), big.from_int(Int(modpoly_[i])));
      if (big.is_zero(acc)) return x;
    }
    throw std::logic_error("GF: no root of modulus in extension");
  }

  template <class E>
  typename E::Elem embed(const E& big, typename E::Elem root, Elem a) const {
    typename E::Elem acc = big.zero();
    for (long i = m_ - 1; i >= 0; --i)
      acc = big.add(big.mul(acc, root), big.from_int(Int(digit(a, i))));
    return acc;
  }

 private:
  long p_, m_, q_;
  std::vector<long> pow_p_;
  std::vector<long> modpoly_;               // c_0..c_{m-1}
  std::vector<std::vector<long>> red_;      // digits of x^{m+i} mod modulus
  std::vector<Elem> exp_;
  std::vector<long> log_;

  long digit(Elem a, long i) const { return (a / pow_p_[i]) % p_; }

  static bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  // ---- bootstrap arithmetic on digit vectors (before tables exist) ----

  std::vector<long> raw_mul(const std::vector<long>& a, const std::vector<long>& b) const {
    std::vector<long> prod(2 * m_ - 1, 0);
    for (long i = 0; i < m_; ++i) {
      if (a[i] == 0) continue;
      for (long j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
    }
    std::vector<long> out(prod.begin(), prod.begin() + m_);
    for (long i = m_; i < 2 * m_ - 1; ++i) {
      if (prod[i] == 0) continue;
      const std::vector<long>& r = red_[i - m_];
      for (long j = 0; j < m_; ++j) out[j] = (out[j] + prod[i] * r[j]) % p_;
    }
    return out;
  }

  std::vector<long> raw_pow(std::vector<long> base, long e) const {
    std::vector<long> acc(m_, 0);
    acc[0] = 1;
    while (e > 0) {
      if (e & 1) acc = raw_mul(acc, base);
      base = raw_mul(base, base);
      e >>= 1;
    }
    return acc;
  }

  Elem encode(const std::vector<long>& d) const {
    Elem out = 0;
    for (long i = 0; i < m_; ++i) out += static_cast<Elem>(d[i] * pow_p_[i]);
    return out;
  }

  // ---- polynomial arithmetic over F_p, for the irreducibility search ----

  static std::vector<long> fp_trim(std::vector<long> v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
  }

  std::vector<long> fp_sub(std::vector<long> a, const std::vector<long>& b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p_ + p_) % p_;
    return fp_trim(std::move(a));
  }

  std::vector<long> fp_mod(std::vector<long> a, const std::vector<long>& f) const {
    // f monic; reduce a modulo f
    const long df = static_cast<long>(f.size()) - 1;
    while (static_cast<long>(a.size()) - 1 >= df) {
      const long da = static_cast<long>(a.size()) - 1;
      long c = a.back();
      if (c != 0)
        for (long j = 0; j <= df; ++j) {
          long& t = a[da - df + j];
          t = ((t - c * f[j]) % p_ + p_) % p_;
        }
      a.pop_back();
      a = fp_trim(a);
      if (a.empty()) break;
    }
    return a;
  }

  std::vector<long> fp_mulmod(const std::vector<long>& a, const std::vector<long>& b,
                              const std::vector<long>& f) const {
    if (a.empty() || b.empty()) return {};
    std::vector<long> prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
    }
    return fp_mod(fp_trim(std::move(prod)), f);
  }

  std::vector<long> fp_powmod(std::vector<long> base, Int e, const std::vector<long>& f) const {
    std::vector<long> acc = {1};
    base = fp_mod(fp_trim(std::move(base)), f);
    while (e > 0) {
      if ((e & 1) != 0) acc = fp_mulmod(acc, base, f);
      base = fp_mulmod(base, base, f);
      e >>= 1;
    }
    return acc;
  }

  std::vector<long> fp_gcd(std::vector<long> a, std::vector<long> b) const {
    a = fp_trim(std::move(a));
    b = fp_trim(std::move(b));
    while (!b.empty()) {
      // reduce a mod b (make b monic on the fly via inverse of its lead)
      long lead = b.back();
      long li = 1;
      for (long t = 1; t < p_; ++t)
        if ((t * lead) % p_ == 1) { li = t; break; }
      std::vector<long> bm(b.size());
      for (size_t i = 0; i < b.size(); ++i) bm[i] = (b[i] * li) % p_;
      std::vector<long> r = fp_mod(a, bm);
      a = b;
      b = r;
    }
    return a;
  }

  // Rabin's test: f of degree m is irreducible over F_p iff x^{p^m} = x
  // (mod f) and gcd(x^{p^{m/l}} - x, f) = 1 for every prime l dividing m.
  bool irreducible(const std::vector<long>& f) const {
    std::vector<long> x = {0, 1};
    Int pm = 1;
    for (long i = 0; i < m_; ++i) pm *= p_;
    std::vector<long> frob = fp_powmod(x, pm, f);
    // compare against x reduced mod f (a constant when deg f = 1)
    std::vector<long> diff = fp_sub(frob, fp_mod(x, f));
    if (!diff.empty()) return false;
    for (const Int& l : prime_factors(Int(m_))) {
      long ml = m_ / static_cast<long>(l);
      Int pml = 1;
      for (long i = 0; i < ml; ++i) pml *= p_;
      std::vector<long> fr = fp_powmod(x, pml, f);
      std::vector<long> g = fp_gcd(fp_sub(fr, fp_mod(x, f)), f);
      if (static_cast<long>(g.size()) - 1 > 0) return false;
    }
    return true;
  }

  void find_modpoly() {
    for (long n = 0; n < q_; ++n) {
      std::vector<long> f(m_ + 1, 0);
      f[m_] = 1;
      for (long i = 0; i < m_; ++i) f[i] = (n / pow_p_[i]) % p_;
      if (irreducible(f)) {
        modpoly_.assign(f.begin(), f.begin() + m_);
        return;
      }
    }
    throw std::logic_error("GF: no irreducible modulus found");
  }

  void build_reduction_rows() {
    // red_[i] = digits of x^{m+i}; x^m = -(c_0 + ... + c_{m-1} x^{m-1})
    red_.resize(m_ - 1 >= 0 ? m_ : 0);
    if (m_ == 0) return;
    red_.assign(m_, std::vector<long>(m_, 0));
    std::vector<long> cur(m_);
    for (long j = 0; j < m_; ++j) cur[j] = (p_ - modpoly_[j] % p_) % p_;
    red_[0] = cur;
    for (long i = 1; i < m_; ++i) {
      // multiply by x: shift up, fold the overflow through red_[0]
      std::vector<long> nxt(m_, 0);
      for (long j = 0; j + 1 < m_; ++j) nxt[j + 1] = cur[j];
      long top = cur[m_ - 1];
      if (top != 0)
        for (long j = 0; j < m_; ++j) nxt[j] = (nxt[j] + top * red_[0][j]) % p_;
      red_[i] = nxt;
      cur = nxt;
    }
  }

  void build_tables() {
    // smallest primitive element, then exp/log over it
    std::vector<Int> factors = prime_factors(Int(q_ - 1));
    long gen = -1;
    for (long g = 1; g < q_; ++g) {
      std::vector<long> gd(m_);
      for (long i = 0; i < m_; ++i) gd[i] = (g / pow_p_[i]) % p_;
      bool ok = true;
      for (const Int& l : factors) {
        long e = (q_ - 1) / static_cast<long>(l);
        std::vector<long> r = raw_pow(gd, e);
        if (encode(r) == 1) { ok = false; break; }
      }
      if (ok) { gen = g; break; }
    }
    if (gen < 0) throw std::logic_error("GF: no primitive element found");
    exp_.resize(q_ - 1);
    log_.assign(q_, 0);
    std::vector<long> acc(m_, 0), gd(m_);
    acc[0] = 1;
    for (long i = 0; i < m_; ++i) gd[i] = (gen / pow_p_[i]) % p_;
    for (long k = 0; k < q_ - 1; ++k) {
      Elem e = encode(acc);
      exp_[k] = e;
      log_[e] = k;
      acc = raw_mul(acc, gd);
    }
  }
};

}  // namespace logbertini
