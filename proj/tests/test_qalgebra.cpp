#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "algebra_oracle.hpp"
#include "qsu2/errors.hpp"
#include "qsu2/qalgebra.hpp"

using namespace qsu2;

namespace {

HalfInt hi(int twice) { return HalfInt::from_twice(twice); }

const char* const kQs[] = {"1/4", "9/16", "1/2"};

// Leibniz rule applied to a raw (unordered) word, each piece reduced by the oracle.
AlgebraElement word_action(const DeformationParameter& dp, const std::string& w, bool left, char g) {
  auto weight = [&](char x) {
    if (left) return (x == 'a' || x == 'c') ? -1 : 1;
    return (x == 'a' || x == 'b') ? -1 : 1;
  };
  auto image = [&](char x) -> char {
    if (left && g == 'e') return x == 'a' ? 'b' : x == 'c' ? 'd' : 0;
    if (left && g == 'f') return x == 'b' ? 'a' : x == 'd' ? 'c' : 0;
    if (!left && g == 'e') return x == 'c' ? 'a' : x == 'd' ? 'b' : 0;
    return x == 'a' ? 'c' : x == 'b' ? 'd' : 0;
  };
  int total = 0;
  for (char x : w) total += weight(x);
  AlgebraElement out;
  int prefix = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int suffix = total - prefix - weight(w[i]);
    if (char img = image(w[i])) {
      std::string nw = w;
      nw[i] = img;
      out += oracle::normal(dp, nw) * q_pow(dp, hi(suffix - prefix));
    }
    prefix += weight(w[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("defining relations") {
  for (const char* qs : kQs) {
    QAlgebra A(DeformationParameter::parse(qs));
    const ExactScalar q = A.qpow_twice(2), qi = A.qpow_twice(-2);
    auto g = [&](char c) { return A.gen(c); };
    CHECK(A.multiply(g('a'), g('b')) == A.multiply(g('b'), g('a')) * q);
    CHECK(A.multiply(g('a'), g('c')) == A.multiply(g('c'), g('a')) * q);
    CHECK(A.multiply(g('b'), g('d')) == A.multiply(g('d'), g('b')) * q);
    CHECK(A.multiply(g('c'), g('d')) == A.multiply(g('d'), g('c')) * q);
    CHECK(A.multiply(g('b'), g('c')) == A.multiply(g('c'), g('b')));
    CHECK(A.multiply(g('a'), g('d')) == A.one() + A.multiply(g('c'), g('b')) * q);
    CHECK(A.multiply(g('d'), g('a')) == A.one() + A.multiply(g('b'), g('c')) * qi);
    CHECK(A.multiply(g('b'), g('a')) == AlgebraElement(Monomial::make(Side::A, 1, 1, 0), qi));
    CHECK(A.multiply(A.one(), g('c')) == g('c'));
  }
}

TEST_CASE("multiplication matches the word-rewriting oracle") {
  std::mt19937_64 rng(11);
  for (const char* qs : kQs) {
    auto dp = DeformationParameter::parse(qs);
    QAlgebra A(dp);
    for (int it = 0; it < 150; ++it) {
      const Monomial x = oracle::random_monomial(rng, 5), y = oracle::random_monomial(rng, 5);
      CHECK(A.multiply(x, y) == oracle::normal(dp, x.word() + y.word()));
    }
    for (int it = 0; it < 60; ++it) {
      const std::string w = oracle::random_word(rng, 7);
      CHECK(A.word(w) == oracle::normal(dp, w));
    }
  }
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 rng(12);
  QAlgebra A(DeformationParameter::parse("9/16"));
  for (int it = 0; it < 100; ++it) {
    const AlgebraElement x(oracle::random_monomial(rng, 6)), y(oracle::random_monomial(rng, 6)),
        z(oracle::random_monomial(rng, 6));
    CHECK(A.multiply(A.multiply(x, y), z) == A.multiply(x, A.multiply(y, z)));
  }
}

TEST_CASE("star") {
  auto dp = DeformationParameter::parse("1/4");
  QAlgebra A(dp);
  const ExactScalar q = A.qpow_twice(2);
  CHECK(A.star(A.gen('b')) == A.gen('c') * (-q));
  CHECK(A.star(A.gen('a')) == A.gen('d'));
  CHECK(A.star(A.gen('c')) == A.gen('b') * (-A.qpow_twice(-2)));
  // star(ab) = star(b) star(a) = (-q c)(d), normal-ordered by the oracle
  CHECK(A.star(A.word("ab")) == oracle::normal(dp, "cd") * (-q));
  std::mt19937_64 rng(13);
  for (const char* qs : kQs) {
    QAlgebra B(DeformationParameter::parse(qs));
    for (int it = 0; it < 100; ++it) {
      const AlgebraElement x = oracle::random_element(rng, 4, 3), y = oracle::random_element(rng, 4, 3);
      CHECK(B.star(B.star(x)) == x);
      CHECK(B.star(B.multiply(x, y)) == B.multiply(B.star(y), B.star(x)));
    }
  }
}

TEST_CASE("diagonal automorphisms") {
  QAlgebra A(DeformationParameter::parse("1/4"));
  CHECK(A.apply(kTheta, A.gen('a')) == A.gen('a') * A.qpow_twice(4));
  CHECK(kSigmaL.then(kSigmaR) == kTheta);
  // sigma_L(b) = k^{-2} |> b; b carries k-weight q^{1/2}, so the factor is q^{-1}
  CHECK(A.apply(kSigmaL, A.gen('b')) == A.gen('b') * q_pow(A.parameter(), hi(-2)));
  std::mt19937_64 rng(14);
  for (int it = 0; it < 60; ++it) {
    const AlgebraElement x = oracle::random_element(rng, 4, 3), y = oracle::random_element(rng, 4, 3);
    CHECK(A.apply(AutomorphismSpec::identity(), x) == x);
    CHECK(A.apply(kSigmaL, x) == A.left_k_power(-2, x));
    CHECK(A.apply(kSigmaR, x) == A.right_action(A.right_action(x, HopfGen::KInv), HopfGen::KInv));
    for (const auto& spec : {kSigmaL, kSigmaR, kTheta, AutomorphismSpec{hi(3), hi(-1)}})
      CHECK(A.apply(spec, A.multiply(x, y)) == A.multiply(A.apply(spec, x), A.apply(spec, y)));
  }
}

TEST_CASE("generator actions agree with the spin-1/2 matrix-coefficient formulas") {
  // a = t_{-1/2,-1/2}, b = t_{-1/2,1/2}, c = t_{1/2,-1/2}, d = t_{1/2,1/2}
  const double q = 0.25;
  auto qn = [q](double x) { return (std::pow(q, -x) - std::pow(q, x)) / (1 / q - q); };
  struct G {
    char name;
    int i2, j2;
  };
  const G gens[] = {{'a', -1, -1}, {'b', -1, 1}, {'c', 1, -1}, {'d', 1, 1}};
  auto lookup = [&](int i2, int j2) {
    for (const auto& g : gens)
      if (g.i2 == i2 && g.j2 == j2) return g.name;
    return '?';
  };
  QAlgebra A(DeformationParameter::parse("1/4"));
  for (const auto& g : gens) {
    const double j = g.j2 / 2.0;
    const double e_coef = std::sqrt(std::max(0.0, qn(1.0) * qn(1.0) - qn(j + 0.5) * qn(j + 0.5)));
    const double f_coef = std::sqrt(std::max(0.0, qn(1.0) * qn(1.0) - qn(j - 0.5) * qn(j - 0.5)));
    const AlgebraElement ea = A.left_action(HopfGen::E, A.gen(g.name));
    const AlgebraElement fa = A.left_action(HopfGen::F, A.gen(g.name));
    if (e_coef > 0.5) {
      CHECK(std::abs(e_coef - 1.0) < 1e-12);
      CHECK(ea == A.gen(lookup(g.i2, g.j2 + 2)));
    } else {
      CHECK(ea.is_zero());
    }
    if (f_coef > 0.5) {
      CHECK(fa == A.gen(lookup(g.i2, g.j2 - 2)));
    } else {
      CHECK(fa.is_zero());
    }
    CHECK(A.left_action(HopfGen::K, A.gen(g.name)) == A.gen(g.name) * A.qpow_twice(g.j2));
    CHECK(A.right_action(A.gen(g.name), HopfGen::K) == A.gen(g.name) * A.qpow_twice(g.i2));
  }
  // right e raises i: c -> a is t_{1/2,*} -> t_{-1/2,*} in this labelling
  CHECK(A.right_action(A.gen('c'), HopfGen::E) == A.gen('a'));
  CHECK(A.right_action(A.gen('d'), HopfGen::E) == A.gen('b'));
  CHECK(A.right_action(A.gen('a'), HopfGen::F) == A.gen('c'));
  CHECK(A.right_action(A.gen('b'), HopfGen::F) == A.gen('d'));
}

TEST_CASE("left action examples") {
  auto dp = DeformationParameter::parse("1/4");
  QAlgebra A(dp);
  CHECK(A.left_action(HopfGen::E, A.gen('a')) == A.gen('b'));
  const ExactScalar coef = q_pow(dp, hi(-1)) + q_pow(dp, hi(3));
  CHECK(A.left_action(HopfGen::E, A.word("aa")) == oracle::normal(dp, "ba") * coef);
  CHECK(A.left_action(HopfGen::K, A.one()) == A.one());
  CHECK(A.left_action(HopfGen::E, A.one()).is_zero());
}

TEST_CASE("actions are well defined on the quotient and satisfy Leibniz") {
  std::mt19937_64 rng(15);
  for (const char* qs : kQs) {
    auto dp = DeformationParameter::parse(qs);
    QAlgebra A(dp);
    for (int it = 0; it < 40; ++it) {
      const std::string w = oracle::random_word(rng, 6);
      CHECK(A.left_action(HopfGen::E, A.word(w)) == word_action(dp, w, true, 'e'));
      CHECK(A.left_action(HopfGen::F, A.word(w)) == word_action(dp, w, true, 'f'));
      CHECK(A.right_action(A.word(w), HopfGen::E) == word_action(dp, w, false, 'e'));
      CHECK(A.right_action(A.word(w), HopfGen::F) == word_action(dp, w, false, 'f'));
    }
    for (int it = 0; it < 60; ++it) {
      const AlgebraElement x(oracle::random_monomial(rng, 4)), y(oracle::random_monomial(rng, 4));
      const AlgebraElement xy = A.multiply(x, y);
      for (HopfGen g : {HopfGen::E, HopfGen::F}) {
        const AlgebraElement lhs = A.left_action(g, xy);
        const AlgebraElement rhs = A.multiply(A.left_action(g, x), A.left_action(HopfGen::K, y)) +
                                   A.multiply(A.left_action(HopfGen::KInv, x), A.left_action(g, y));
        CHECK(lhs == rhs);
        const AlgebraElement rl = A.right_action(xy, g);
        const AlgebraElement rr = A.multiply(A.right_action(x, g), A.right_action(y, HopfGen::K)) +
                                  A.multiply(A.right_action(x, HopfGen::KInv), A.right_action(y, g));
        CHECK(rl == rr);
      }
      CHECK(A.left_action(HopfGen::K, xy) == A.multiply(A.left_action(HopfGen::K, x), A.left_action(HopfGen::K, y)));
    }
  }
}

TEST_CASE("left and right actions commute") {
  std::mt19937_64 rng(16);
  QAlgebra A(DeformationParameter::parse("9/16"));
  const HopfGen gens[] = {HopfGen::K, HopfGen::KInv, HopfGen::E, HopfGen::F};
  for (int it = 0; it < 30; ++it) {
    const AlgebraElement x = oracle::random_element(rng, 5, 3);
    for (HopfGen g : gens)
      for (HopfGen h : gens) CHECK(A.right_action(A.left_action(g, x), h) == A.left_action(g, A.right_action(x, h)));
  }
}

TEST_CASE("haar state") {
  QAlgebra A(DeformationParameter::parse("1/4"));
  CHECK(A.haar_state(A.one()) == ExactScalar(1L));
  CHECK(A.haar_state(A.word("bc")) == ExactScalar(mpq_class(-4, 17)));
  CHECK(A.haar_state(A.gen('a')) == ExactScalar(0L));
  CHECK(A.haar_inner_product(A.one(), A.one()) == ExactScalar(1L));
  // (b,b) = h(b* b) = -q h(c b) = q/[2]_q
  const ExactScalar q(mpq_class(1, 4));
  CHECK(A.haar_inner_product(A.gen('b'), A.gen('b')) == A.haar_state(A.multiply(A.star(A.gen('b')), A.gen('b'))));
  CHECK(A.haar_inner_product(A.gen('b'), A.gen('b')) == q / A.q_number(hi(4)));
  CHECK(A.haar_inner_product(A.gen('a'), A.gen('b')) == ExactScalar(0L));
}

TEST_CASE("KMS property of the Haar state") {
  std::mt19937_64 rng(17);
  for (const char* qs : kQs) {
    QAlgebra A(DeformationParameter::parse(qs));
    CHECK(A.haar_state(A.word("ad")) == A.haar_state(A.multiply(A.apply(kTheta, A.gen('d')), A.gen('a'))));
    for (int it = 0; it < 80; ++it) {
      const AlgebraElement x = oracle::random_element(rng, 4, 3), y = oracle::random_element(rng, 4, 3);
      CHECK(A.haar_state(A.multiply(x, y)) == A.haar_state(A.multiply(A.apply(kTheta, y), x)));
    }
  }
}

TEST_CASE("Haar Gram matrix on {1,a,b,c,d} is positive semidefinite") {
  for (const char* qs : kQs) {
    QAlgebra A(DeformationParameter::parse(qs));
    const AlgebraElement basis[] = {A.one(), A.gen('a'), A.gen('b'), A.gen('c'), A.gen('d')};
    std::vector<std::vector<ExactScalar>> g(5, std::vector<ExactScalar>(5));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) g[i][j] = A.haar_inner_product(basis[i], basis[j]);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) CHECK(g[i][j] == g[j][i]);
    // exact symmetric elimination: every pivot must be >= 0, zero pivots need zero rows
    for (int k = 0; k < 5; ++k) {
      const int s = g[k][k].to_bigfloat(256).sign();
      CHECK(s >= 0);
      if (s == 0) {
        for (int j = k + 1; j < 5; ++j) CHECK(g[k][j].is_zero());
        continue;
      }
      for (int i = k + 1; i < 5; ++i) {
        const ExactScalar f = g[i][k] / g[k][k];
        for (int j = k; j < 5; ++j) g[i][j] -= f * g[k][j];
      }
    }
  }
}

TEST_CASE("twisted commutator components") {
  std::mt19937_64 rng(18);
  for (const char* qs : kQs) {
    QAlgebra A(DeformationParameter::parse(qs));
    const auto one = A.twisted_commutator_components(A.one());
    CHECK(one.diagonal.is_zero());
    CHECK(one.raising.is_zero());
    CHECK(one.lowering.is_zero());
    const ExactScalar q = A.qpow_twice(2), qi = A.qpow_twice(-2);
    CHECK(A.twisted_commutator_components(A.gen('a')).diagonal == A.gen('a') * ((q - ExactScalar(1L)) / (qi - q)));
    CHECK(A.twisted_commutator_components(A.gen('b')).raising.is_zero());
    // twisted Leibniz: de dk^-1 (xy) - dk^-2(x) de dk^-1(y) = (de dk^-1 x) y
    auto dd = [&](const AlgebraElement& x) { return A.left_action(HopfGen::E, A.left_k_power(-1, x)); };
    const char gens[] = {'a', 'b', 'c', 'd'};
    for (char u : gens)
      for (char v : gens) {
        const AlgebraElement x = A.gen(u), y = A.gen(v);
        CHECK(dd(A.multiply(x, y)) - A.multiply(A.left_k_power(-2, x), dd(y)) == A.multiply(dd(x), y));
      }
    for (int it = 0; it < 40; ++it) {
      const AlgebraElement x(oracle::random_monomial(rng, 4)), y(oracle::random_monomial(rng, 4));
      CHECK(dd(A.multiply(x, y)) - A.multiply(A.left_k_power(-2, x), dd(y)) == A.multiply(dd(x), y));
    }
  }
}

TEST_CASE("expression parser") {
  auto dp = DeformationParameter::parse("1/4");
  QAlgebra A(dp);
  CHECK(A.parse("1") == A.one());
  CHECK(A.parse("a^2 b c^3") == AlgebraElement(Monomial::make(Side::A, 2, 1, 3)));
  CHECK(A.parse("d b^2") == AlgebraElement(Monomial::make(Side::D, 1, 2, 0)));
  CHECK(A.parse("b a") == oracle::normal(dp, "ba"));
  CHECK(A.parse("-3/4 b c + 2 - a") ==
        A.word("bc") * ExactScalar(mpq_class(-3, 4)) + A.one() * ExactScalar(2L) - A.gen('a'));
  CHECK(A.parse("0.5*a") == A.gen('a') * ExactScalar(mpq_class(1, 2)));
  CHECK_THROWS_AS(A.parse("A b"), ParseError);
  CHECK_THROWS_AS(A.parse("a b x"), ParseError);
  CHECK_THROWS_AS(A.parse(""), ParseError);
  CHECK_THROWS_AS(A.parse("a^"), ParseError);
  CHECK(A.parse("a^2 b c^3").terms().begin()->first.to_string() == "a^2 b c^3");
}

TEST_CASE("lattice shift selection rule") {
  for (int p = 0; p <= 3; ++p)
    for (int m = 0; m <= 3; ++m)
      for (int n = 0; n <= 3; ++n)
        for (Side s : {Side::A, Side::D}) {
          if (s == Side::D && p == 0) continue;
          const Monomial mono = Monomial::make(s, p, m, n);
          CHECK(lattice_shift(mono).is_zero() == (p == 0 && m == n));
        }
}
