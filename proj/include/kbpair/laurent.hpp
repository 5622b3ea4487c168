#pragma once

// Sparse Laurent polynomials in Z[t, t^-1] with GMP coefficients.

#include <gmpxx.h>

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kbpair/error.hpp"

namespace kbpair {

using Integer = mpz_class;
using Exponent = std::int64_t;

struct Monomial {
  Integer coefficient;
  Exponent exponent = 0;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.exponent == b.exponent && a.coefficient == b.coefficient;
  }
  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    return {Integer(a.coefficient * b.coefficient), a.exponent + b.exponent};
  }
};

class LaurentPoly {
 public:
  using Term = std::pair<Exponent, Integer>;

  LaurentPoly() = default;

  // Sorts, merges equal exponents and drops zero coefficients.
  static LaurentPoly from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    LaurentPoly p;
    for (auto& [e, c] : terms) {
      if (!p.terms_.empty() && p.terms_.back().first == e) {
        p.terms_.back().second += c;
      } else {
        if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
        p.terms_.emplace_back(e, std::move(c));
      }
    }
    if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
    return p;
  }

  static LaurentPoly monomial(const Integer& c, Exponent e) {
    LaurentPoly p;
    if (c != 0) p.terms_.emplace_back(e, c);
    return p;
  }
  static LaurentPoly monomial(const Monomial& m) { return monomial(m.coefficient, m.exponent); }
  static LaurentPoly constant(const Integer& c) { return monomial(c, 0); }
  static LaurentPoly one() { return constant(1); }
  // t^e
  static LaurentPoly t(Exponent e = 1) { return monomial(1, e); }
  // The loop value -t^-2 - t^2.
  static LaurentPoly delta() { return from_terms({{-2, Integer(-1)}, {2, Integer(-1)}}); }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  Exponent min_exponent() const { return terms_.empty() ? 0 : terms_.front().first; }
  Exponent max_exponent() const { return terms_.empty() ? 0 : terms_.back().first; }

  Integer coefficient(Exponent e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, Exponent x) { return t.first < x; });
    if (it != terms_.end() && it->first == e) return it->second;
    return 0;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    return merge(a, b, false);
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    return merge(a, b, true);
  }
  friend LaurentPoly operator-(LaurentPoly a) {
    for (auto& term : a.terms_) term.second = -term.second;
    return a;
  }
  LaurentPoly& operator+=(const LaurentPoly& b) { return *this = *this + b; }
  LaurentPoly& operator-=(const LaurentPoly& b) { return *this = *this - b; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly& operator*=(const LaurentPoly& b);

  friend LaurentPoly operator*(const Integer& c, LaurentPoly p) {
    if (c == 0) return {};
    for (auto& term : p.terms_) term.second *= c;
    return p;
  }

  // Multiplication by t^k.
  LaurentPoly shifted(Exponent k) const {
    LaurentPoly p = *this;
    for (auto& term : p.terms_) term.first += k;
    return p;
  }

 private:
  static LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b, bool subtract) {
    LaurentPoly out;
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
        out.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->first < i->first) {
        out.terms_.emplace_back(j->first, subtract ? Integer(-j->second) : j->second);
        ++j;
      } else {
        Integer c = subtract ? Integer(i->second - j->second) : Integer(i->second + j->second);
        if (c != 0) out.terms_.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return out;
  }

  friend LaurentPoly square(const LaurentPoly& a);
  friend struct ProductKernel;

  std::vector<Term> terms_;
};

// Dense accumulation over the common exponent stride when it fits, sorted
// merge of all products otherwise.
struct ProductKernel {
  struct Layout {
    Exponent base = 0;
    Exponent stride = 1;
    std::size_t length = 0;
  };

  static Exponent stride_of(const LaurentPoly& p, Exponent g) {
    const Exponent lo = p.min_exponent();
    for (const auto& term : p.terms_) g = std::gcd(g, term.first - lo);
    return g;
  }

  static Layout layout(const LaurentPoly& a, const LaurentPoly& b) {
    Exponent g = stride_of(b, stride_of(a, 0));
    if (g == 0) g = 1;
    Layout out;
    out.base = a.min_exponent() + b.min_exponent();
    out.stride = g;
    out.length = static_cast<std::size_t>((a.max_exponent() - a.min_exponent()) / g +
                                          (b.max_exponent() - b.min_exponent()) / g + 1);
    return out;
  }

  static bool dense_fits(const Layout& l, std::size_t na, std::size_t nb) {
    return l.length <= 4 * na * nb + 64;
  }

  static LaurentPoly collect(const Layout& l, std::vector<Integer>& acc) {
    LaurentPoly out;
    for (std::size_t k = 0; k < acc.size(); ++k) {
      if (acc[k] != 0)
        out.terms_.emplace_back(l.base + static_cast<Exponent>(k) * l.stride, std::move(acc[k]));
    }
    return out;
  }

  static LaurentPoly multiply(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const Layout l = layout(a, b);
    if (!dense_fits(l, a.size(), b.size())) {
      std::vector<LaurentPoly::Term> products;
      products.reserve(a.size() * b.size());
      for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) products.emplace_back(ea + eb, Integer(ca * cb));
      return LaurentPoly::from_terms(std::move(products));
    }
    std::vector<Integer> acc(l.length);
    for (const auto& [ea, ca] : a.terms_) {
      const Exponent ia = (ea - a.min_exponent()) / l.stride;
      for (const auto& [eb, cb] : b.terms_) {
        const Exponent k = ia + (eb - b.min_exponent()) / l.stride;
        mpz_addmul(acc[k].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      }
    }
    return collect(l, acc);
  }

  // Cross products are accumulated once and doubled, then the diagonal is added.
  static LaurentPoly square(const LaurentPoly& a) {
    if (a.is_zero()) return {};
    const Layout l = layout(a, a);
    if (!dense_fits(l, a.size(), a.size())) return multiply_general(a, a);
    std::vector<Integer> acc(l.length);
    const auto& t = a.terms_;
    const Exponent lo = a.min_exponent();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Exponent ii = (t[i].first - lo) / l.stride;
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        const Exponent k = ii + (t[j].first - lo) / l.stride;
        mpz_addmul(acc[k].get_mpz_t(), t[i].second.get_mpz_t(), t[j].second.get_mpz_t());
      }
    }
    for (auto& c : acc) mpz_mul_2exp(c.get_mpz_t(), c.get_mpz_t(), 1);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Exponent k = 2 * ((t[i].first - lo) / l.stride);
      mpz_addmul(acc[k].get_mpz_t(), t[i].second.get_mpz_t(), t[i].second.get_mpz_t());
    }
    return collect(l, acc);
  }

 private:
  static LaurentPoly multiply_general(const LaurentPoly& a, const LaurentPoly& b) {
    std::vector<LaurentPoly::Term> products;
    products.reserve(a.size() * b.size());
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) products.emplace_back(ea + eb, Integer(ca * cb));
    return LaurentPoly::from_terms(std::move(products));
  }
};

inline LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (&a == &b) return ProductKernel::square(a);
  return ProductKernel::multiply(a, b);
}

inline LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& b) { return *this = *this * b; }

inline LaurentPoly square(const LaurentPoly& a) { return ProductKernel::square(a); }

// a^n by repeated squaring; a^0 = 1.
inline LaurentPoly pow(const LaurentPoly& a, std::uint64_t n) {
  LaurentPoly result = LaurentPoly::one();
  LaurentPoly base = a;
  while (n != 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n != 0) base = square(base);
  }
  return result;
}

// t <- t^-1
inline LaurentPoly mirror(const LaurentPoly& a) {
  std::vector<LaurentPoly::Term> terms;
  terms.reserve(a.size());
  for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it)
    terms.emplace_back(-it->first, it->second);
  return LaurentPoly::from_terms(std::move(terms));
}

inline Monomial leading_term(const LaurentPoly& a) {
  if (a.is_zero()) throw DomainError("leading term of the zero polynomial");
  const auto& back = a.terms().back();
  return {back.second, back.first};
}

inline void require_modulus(const Integer& m) {
  if (m < 2) throw DomainError("modulus must be at least 2, got " + m.get_str());
}

// Coefficients replaced by their representatives in {0, ..., m-1}.
inline LaurentPoly mod_reduce(const LaurentPoly& a, const Integer& m) {
  require_modulus(m);
  std::vector<LaurentPoly::Term> terms;
  terms.reserve(a.size());
  for (const auto& [e, c] : a.terms()) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (r != 0) terms.emplace_back(e, std::move(r));
  }
  return LaurentPoly::from_terms(std::move(terms));
}

// Every coefficient of a - b divisible by m.
inline bool congruent(const LaurentPoly& a, const LaurentPoly& b, const Integer& m) {
  return mod_reduce(a - b, m).is_zero();
}

namespace detail {

inline void append_term(std::string& out, const Integer& c, Exponent e, bool first) {
  const bool negative = c < 0;
  if (first) {
    if (negative) out += '-';
  } else {
    out += negative ? " - " : " + ";
  }
  const Integer magnitude = abs(c);
  if (e == 0) {
    out += magnitude.get_str();
    return;
  }
  if (magnitude != 1) out += magnitude.get_str();
  out += 't';
  if (e != 1) {
    out += '^';
    out += std::to_string(e);
  }
}

}  // namespace detail

// Ascending exponents, e.g. "-2t^-6 + 2t^-2 - 2t^2 + t^6"; zero prints "0".
inline std::string format(const LaurentPoly& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : a.terms()) {
    detail::append_term(out, c, e, first);
    first = false;
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << format(p); }

inline std::ostream& operator<<(std::ostream& os, const Monomial& m) {
  return os << format(LaurentPoly::monomial(m));
}

namespace detail {

class PolyScanner {
 public:
  explicit PolyScanner(std::string_view text) : text_(text) {}

  LaurentPoly parse() {
    skip_ws();
    if (at_end()) fail("empty polynomial", {"0", "term"});
    std::vector<LaurentPoly::Term> terms;
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t first_start = pos_;
    if (peek() == '0' && only_zero_follows()) {
      if (negative) fail("zero polynomial cannot be signed", {"term"});
      ++pos_;
      skip_ws();
      return {};
    }
    pos_ = first_start;
    terms.push_back(term(negative));
    for (;;) {
      skip_ws();
      if (at_end()) break;
      const char sign = peek();
      if (sign != '+' && sign != '-') fail("unexpected character", {"+", "-", "end of input"});
      ++pos_;
      skip_ws();
      terms.push_back(term(sign == '-'));
    }
    return LaurentPoly::from_terms(std::move(terms));
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  void skip_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool only_zero_follows() const {
    std::size_t p = pos_ + 1;
    while (p < text_.size() && (text_[p] == ' ' || text_[p] == '\t')) ++p;
    return p == text_.size();
  }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError("polynomial parse error at offset " + std::to_string(pos_) + ": " + msg, pos_,
                     std::move(expected));
  }

  std::string_view digits() {
    const std::size_t start = pos_;
    while (!at_end() && is_digit(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  LaurentPoly::Term term(bool negative) {
    const std::size_t start = pos_;
    Integer coeff = 1;
    const std::string_view ds = digits();
    if (!ds.empty()) {
      coeff = Integer(std::string(ds));
      if (coeff == 0) {
        pos_ = start;
        fail("coefficient must be positive", {"coefficient", "t"});
      }
    }
    Exponent e = 0;
    if (peek() == 't') {
      ++pos_;
      e = 1;
      if (peek() == '^') {
        ++pos_;
        const std::size_t exp_start = pos_;
        if (peek() == '-') ++pos_;
        if (digits().empty()) fail("missing exponent", {"integer"});
        const std::string_view es = text_.substr(exp_start, pos_ - exp_start);
        auto [ptr, ec] = std::from_chars(es.data(), es.data() + es.size(), e);
        if (ec != std::errc()) {
          pos_ = exp_start;
          fail("exponent out of range", {"integer"});
        }
      }
    } else if (ds.empty()) {
      fail("expected a term", {"coefficient", "t"});
    }
    if (negative) coeff = -coeff;
    return {e, std::move(coeff)};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline LaurentPoly parse_laurent(std::string_view text) { return detail::PolyScanner(text).parse(); }

}  // namespace kbpair
