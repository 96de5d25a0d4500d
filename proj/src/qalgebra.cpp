#include "qsu2/qalgebra.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "qsu2/errors.hpp"

namespace qsu2 {

namespace {

int letter_left_twice(char g) {
  switch (g) {
    case 'a':
    case 'c':
      return -1;
    default:
      return 1;
  }
}

int letter_right_twice(char g) {
  switch (g) {
    case 'a':
    case 'b':
      return -1;
    default:
      return 1;
  }
}

// Letters are stored in normal order, so any contiguous piece of a normal word is
// itself a normal monomial.
Monomial normal_word_monomial(std::string_view w) {
  Monomial out;
  for (char g : w) {
    switch (g) {
      case 'a':
        out.side = Side::A;
        ++out.p;
        break;
      case 'd':
        out.side = Side::D;
        ++out.p;
        break;
      case 'b':
        ++out.m;
        break;
      case 'c':
        ++out.n;
        break;
      default:
        throw std::logic_error("bad generator letter");
    }
  }
  return out;
}

char act_letter(bool left, HopfGen g, char x) {
  if (left) {
    if (g == HopfGen::E) return x == 'a' ? 'b' : x == 'c' ? 'd' : 0;
    return x == 'b' ? 'a' : x == 'd' ? 'c' : 0;
  }
  if (g == HopfGen::E) return x == 'c' ? 'a' : x == 'd' ? 'b' : 0;
  return x == 'a' ? 'c' : x == 'b' ? 'd' : 0;
}

}  // namespace

Monomial Monomial::make(Side side, int p, int m, int n) {
  if (p < 0 || m < 0 || n < 0) throw std::invalid_argument("negative monomial exponent");
  return Monomial{p == 0 ? Side::A : side, p, m, n};
}

std::string Monomial::word() const {
  std::string w(static_cast<std::size_t>(p), side == Side::A ? 'a' : 'd');
  w.append(static_cast<std::size_t>(m), 'b');
  w.append(static_cast<std::size_t>(n), 'c');
  return w;
}

std::string Monomial::to_string() const {
  if (is_one()) return "1";
  std::string out;
  auto put = [&out](char g, int e) {
    if (e == 0) return;
    if (!out.empty()) out += ' ';
    out += g;
    if (e > 1) out += '^' + std::to_string(e);
  };
  put(side == Side::A ? 'a' : 'd', p);
  put('b', m);
  put('c', n);
  return out;
}

int left_weight_twice(const Monomial& mono) { return -mono.signed_p() + mono.m - mono.n; }
int right_weight_twice(const Monomial& mono) { return -mono.signed_p() - mono.m + mono.n; }

LatticeShift lattice_shift(const Monomial& mono) {
  // per generator (2dl, 2di, 2dj): a (-1,-1,-1), b (+1,-1,+1), c (-1,+1,-1), d (+1,+1,+1)
  const int sp = mono.signed_p();
  return {-sp + mono.m - mono.n, -sp - mono.m + mono.n, -sp + mono.m - mono.n};
}

AlgebraElement::AlgebraElement(const Monomial& mono, ExactScalar coeff) { add_term(mono, coeff); }

ExactScalar AlgebraElement::coefficient(const Monomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? ExactScalar(0L) : it->second;
}

int AlgebraElement::degree() const {
  int d = 0;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono.degree());
  return d;
}

void AlgebraElement::add_term(const Monomial& mono, const ExactScalar& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (inserted) return;
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  for (const auto& [mono, c] : o.terms_) add_term(mono, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  for (const auto& [mono, c] : o.terms_) add_term(mono, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const ExactScalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [mono, c] : terms_) c *= s;
  return *this;
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement out = *this;
  for (auto& [mono, c] : out.terms_) c = -c;
  return out;
}

std::string AlgebraElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c.to_string() << ")*" << mono.to_string();
  }
  return os.str();
}

QAlgebra::QAlgebra(DeformationParameter dp) : dp_(std::move(dp)) {
  qpow_table_.reserve(2 * kTableHalf + 1);
  const ExactScalar v = dp_.v();
  const ExactScalar vinv = v.inverse();
  std::vector<ExactScalar> pos{ExactScalar(1L)}, neg{ExactScalar(1L)};
  for (int t = 1; t <= kTableHalf; ++t) {
    pos.push_back(pos.back() * v);
    neg.push_back(neg.back() * vinv);
  }
  for (int t = kTableHalf; t >= 1; --t) qpow_table_.push_back(neg[t]);
  for (int t = 0; t <= kTableHalf; ++t) qpow_table_.push_back(pos[t]);
}

ExactScalar QAlgebra::qpow_twice(int twice) const {
  if (twice >= -kTableHalf && twice <= kTableHalf) return qpow_table_[static_cast<std::size_t>(twice + kTableHalf)];
  return q_pow(dp_, HalfInt::from_twice(twice));
}

AlgebraElement QAlgebra::gen(char g) const {
  switch (g) {
    case 'a':
      return Monomial::a();
    case 'b':
      return Monomial::b();
    case 'c':
      return Monomial::c();
    case 'd':
      return Monomial::d();
    default:
      throw ParseError(std::string("unknown generator '") + g + "'");
  }
}

AlgebraElement QAlgebra::multiply(const Monomial& x, const Monomial& y) const {
  // x y = A1^p1 (b^m1 c^n1 A2^p2) b^m2 c^n2; moving A2^p2 left gives q^{-+p2(m1+n1)}.
  int w_twice = 0;
  if (y.p > 0) w_twice = (y.side == Side::A ? -2 : 2) * y.p * (x.m + x.n);

  // A1^p1 A2^p2 = side^s * poly(zeta), zeta = bc.
  Side side = Side::A;
  int s = 0;
  std::vector<ExactScalar> poly{ExactScalar(1L)};
  if (x.p == 0 || y.p == 0 || x.side == y.side) {
    side = x.p > 0 ? x.side : y.side;
    s = x.p + y.p;
  } else {
    const int r = y.p;
    const int k = std::min(x.p, y.p);
    for (int j = 0; j < k; ++j) {
      // a^p d^r = a^{p-1} d^{r-1} (1 + q^{2r-1} zeta); d^p a^r = d^{p-1} a^{r-1} (1 + q^{1-2r} zeta)
      const int e = x.side == Side::A ? 2 * (r - j) - 1 : 1 - 2 * (r - j);
      const ExactScalar f = qpow_twice(2 * e);
      std::vector<ExactScalar> next(poly.size() + 1, ExactScalar(0L));
      for (std::size_t t = 0; t < poly.size(); ++t) {
        next[t] += poly[t];
        next[t + 1] += poly[t] * f;
      }
      poly = std::move(next);
    }
    if (x.p > y.p) {
      side = x.side;
      s = x.p - y.p;
    } else {
      side = y.side;
      s = y.p - x.p;
    }
  }

  AlgebraElement out;
  const ExactScalar w = qpow_twice(w_twice);
  for (std::size_t t = 0; t < poly.size(); ++t) {
    const int ti = static_cast<int>(t);
    out.add_term(Monomial::make(side, s, ti + x.m + y.m, ti + x.n + y.n), poly[t] * w);
  }
  return out;
}

AlgebraElement QAlgebra::multiply(const AlgebraElement& x, const AlgebraElement& y) const {
  AlgebraElement out;
  for (const auto& [mx, cx] : x.terms())
    for (const auto& [my, cy] : y.terms()) {
      const ExactScalar c = cx * cy;
      const AlgebraElement prod = multiply(mx, my);
      for (const auto& [mono, cm] : prod.terms()) out.add_term(mono, c * cm);
    }
  return out;
}

AlgebraElement QAlgebra::word(std::string_view letters) const {
  AlgebraElement out = one();
  for (char g : letters) out = multiply(out, gen(g));
  return out;
}

AlgebraElement QAlgebra::power(const AlgebraElement& x, int k) const {
  if (k < 0) throw std::invalid_argument("negative power");
  AlgebraElement out = one();
  for (int i = 0; i < k; ++i) out = multiply(out, x);
  return out;
}

AlgebraElement QAlgebra::star(const Monomial& x) const {
  // (A^p b^m c^n)* = (c*)^n (b*)^m (A*)^p = (-1)^{m+n} q^{m-n} b^n c^m A'^p, then reorder.
  const int shift = x.side == Side::A ? x.p * (x.m + x.n) : -x.p * (x.m + x.n);
  ExactScalar coeff = qpow_twice(2 * (x.m - x.n + shift));
  if ((x.m + x.n) % 2 != 0) coeff = -coeff;
  return AlgebraElement(Monomial::make(x.side == Side::A ? Side::D : Side::A, x.p, x.n, x.m), coeff);
}

AlgebraElement QAlgebra::star(const AlgebraElement& x) const {
  // coefficients live in a real field, so antilinearity is plain linearity here
  AlgebraElement out;
  for (const auto& [mono, c] : x.terms()) {
    const AlgebraElement s = star(mono);
    for (const auto& [m2, c2] : s.terms()) out.add_term(m2, c * c2);
  }
  return out;
}

AlgebraElement QAlgebra::apply(const AutomorphismSpec& spec, const AlgebraElement& x) const {
  AlgebraElement out;
  for (const auto& [mono, c] : x.terms()) out.add_term(mono, c * qpow_twice(spec.scale_twice(mono)));
  return out;
}

AlgebraElement QAlgebra::left_k_power(int r, const AlgebraElement& x) const {
  AlgebraElement out;
  for (const auto& [mono, c] : x.terms()) out.add_term(mono, c * qpow_twice(r * left_weight_twice(mono)));
  return out;
}

AlgebraElement QAlgebra::act_on_word(const Monomial& mono, bool left, HopfGen g) const {
  // Leibniz rule from Delta(g) = g (x) k + k^{-1} (x) g, for both sides.
  const std::string w = mono.word();
  const int len = static_cast<int>(w.size());
  std::vector<int> wt(w.size());
  int total = 0;
  for (int i = 0; i < len; ++i) {
    wt[i] = left ? letter_left_twice(w[i]) : letter_right_twice(w[i]);
    total += wt[i];
  }
  AlgebraElement out;
  int prefix = 0;
  for (int i = 0; i < len; ++i) {
    const int suffix = total - prefix - wt[i];
    const char img = act_letter(left, g, w[i]);
    if (img != 0) {
      const Monomial pre = normal_word_monomial(std::string_view(w).substr(0, i));
      const Monomial post = normal_word_monomial(std::string_view(w).substr(i + 1));
      AlgebraElement t = multiply(multiply(AlgebraElement(pre), gen(img)), AlgebraElement(post));
      t *= qpow_twice(suffix - prefix);
      out += t;
    }
    prefix += wt[i];
  }
  return out;
}

AlgebraElement QAlgebra::left_action(HopfGen g, const AlgebraElement& x) const {
  if (g == HopfGen::K) return left_k_power(1, x);
  if (g == HopfGen::KInv) return left_k_power(-1, x);
  AlgebraElement out;
  for (const auto& [mono, c] : x.terms()) out += act_on_word(mono, true, g) * c;
  return out;
}

AlgebraElement QAlgebra::right_action(const AlgebraElement& x, HopfGen g) const {
  AlgebraElement out;
  if (g == HopfGen::K || g == HopfGen::KInv) {
    const int r = g == HopfGen::K ? 1 : -1;
    for (const auto& [mono, c] : x.terms()) out.add_term(mono, c * qpow_twice(r * right_weight_twice(mono)));
    return out;
  }
  for (const auto& [mono, c] : x.terms()) out += act_on_word(mono, false, g) * c;
  return out;
}

ExactScalar QAlgebra::haar_state(const Monomial& x) const {
  if (x.p != 0 || x.m != x.n) return ExactScalar(0L);
  ExactScalar v = q_number(HalfInt::from_int(x.n + 1)).inverse();
  return x.n % 2 == 0 ? v : -v;
}

ExactScalar QAlgebra::haar_state(const AlgebraElement& x) const {
  ExactScalar out(0L);
  for (const auto& [mono, c] : x.terms())
    if (mono.p == 0 && mono.m == mono.n) out += c * haar_state(mono);
  return out;
}

ExactScalar QAlgebra::haar_inner_product(const AlgebraElement& x, const AlgebraElement& y) const {
  return haar_state(multiply(star(x), y));
}

TwistedComponents QAlgebra::twisted_commutator_components(const AlgebraElement& x) const {
  const ExactScalar inv_gap = (qpow_twice(-2) - qpow_twice(2)).inverse();
  TwistedComponents out;
  out.diagonal = (left_k_power(-2, x) - x) * inv_gap;
  const AlgebraElement kx = left_k_power(-1, x);
  out.raising = left_action(HopfGen::E, kx) * qpow_twice(-1);
  out.lowering = left_action(HopfGen::F, kx) * qpow_twice(1);
  return out;
}

AlgebraElement QAlgebra::parse(std::string_view text) const {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == '*')) ++pos;
  };
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("cannot parse expression at offset " + std::to_string(pos) + ": " + why);
  };

  AlgebraElement out;
  skip();
  if (pos == text.size()) throw fail("empty expression");
  bool first = true;
  while (pos < text.size()) {
    bool negative = false;
    bool saw_sign = false;
    while (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      negative ^= text[pos] == '-';
      saw_sign = true;
      ++pos;
      skip();
    }
    if (!first && !saw_sign) throw fail("expected '+' or '-'");
    first = false;

    ExactScalar coeff(1L);
    bool has_content = false;
    if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
      const std::size_t start = pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/' || text[pos] == '.'))
        ++pos;
      coeff = ExactScalar(parse_rational(text.substr(start, pos - start)));
      has_content = true;
    }
    AlgebraElement term = one();
    for (;;) {
      skip();
      if (pos >= text.size()) break;
      const char g = text[pos];
      if (g != 'a' && g != 'b' && g != 'c' && g != 'd') break;
      ++pos;
      int e = 1;
      skip();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip();
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw fail("expected exponent");
        e = std::stoi(std::string(text.substr(start, pos - start)));
      }
      term = multiply(term, power(gen(g), e));
      has_content = true;
    }
    if (!has_content) throw fail("expected coefficient or generator");
    if (negative) coeff = -coeff;
    out += term * coeff;
    skip();
    if (pos < text.size() && text[pos] != '+' && text[pos] != '-') throw fail("unexpected character");
  }
  return out;
}

}  // namespace qsu2
