#include <gtest/gtest.h>

#include <algorithm>

#include "gsos/hash.hpp"
#include "gsos/languages.hpp"
#include "oracles.hpp"

namespace gsos {
namespace {

CarrierSizes allTwo() {
  CarrierSizes s;
  for (Carrier c : {Carrier::Nat, Carrier::Int, Carrier::Expr, Carrier::IntExpr, Carrier::Inst})
    s[std::string(carrierName(c))] = 2;
  return s;
}

std::vector<SpfValue> leaves(std::uint64_t n) {
  std::vector<SpfValue> out;
  for (VarId i = 0; i < n; ++i) out.push_back(SpfValue::leafOf(Term::var(i)));
  return out;
}

// Derivative position count, explicit hole enumeration and the brute-force
// oracles must agree.
void expectCountsAgree(const SpfExpr& f, const CarrierSizes& sizes, std::uint64_t n) {
  std::uint64_t byDerivative = countPositions(derive(f), sizes, n);
  std::uint64_t byOracle = oracle::oneHoleCount(f, sizes, n);
  EXPECT_EQ(byDerivative, byOracle) << toString(f) << " n=" << n;
  EXPECT_EQ(enumerateHoleValues(f, sizes, leaves(n)).size(), byDerivative) << toString(f) << " n=" << n;
  EXPECT_EQ(n * byDerivative, oracle::markedPositionCount(f, sizes, n)) << toString(f) << " n=" << n;
}

TEST(SpfProperty, RegisteredSignaturesAgreeWithBruteForce) {
  for (const auto& name : languageNames()) {
    SpfExpr f = language(name).signature.spf();
    for (std::uint64_t n = 0; n <= 3; ++n) expectCountsAgree(f, allTwo(), n);
  }
}

// Hand-rolled generator of small polynomial functors, compositions included.
// Constructors are weighted towards Id and the binary forms so that most
// draws have positions.
SpfExpr randomSpf(Rng& rng, int depth) {
  std::uint64_t pick = depth <= 0 ? rng.below(5) : rng.below(11);
  switch (pick) {
    case 0: return SpfExpr::zero();
    case 1: return SpfExpr::one();
    case 2:
    case 3: return SpfExpr::id();
    case 4: return SpfExpr::constant(rng.below(2) ? "Nat" : "Expr");
    case 5:
    case 6: return SpfExpr::sum(randomSpf(rng, depth - 1), randomSpf(rng, depth - 1));
    case 7:
    case 8: return SpfExpr::product(randomSpf(rng, depth - 1), randomSpf(rng, depth - 1));
    default: return SpfExpr::compose(randomSpf(rng, depth - 1), randomSpf(rng, depth - 1));
  }
}

TEST(SpfProperty, RandomFunctorsAgreeWithBruteForce) {
  Rng rng(0x5BF);
  CarrierSizes sizes{{"Nat", 2}, {"Expr", 3}};
  std::size_t withPositions = 0;
  for (int i = 0; i < 300; ++i) {
    SpfExpr f = randomSpf(rng, 3);
    for (std::uint64_t n = 0; n <= 3; ++n) expectCountsAgree(f, sizes, n);
    if (countPositions(derive(f), sizes, 2) > 0) ++withPositions;
  }
  EXPECT_GT(withPositions, 100u);
}

TEST(SpfProperty, DecomposeThenRefillIsIdentity) {
  Rng rng(0xDEC);
  CarrierSizes sizes{{"Nat", 2}, {"Expr", 2}};
  for (int i = 0; i < 200; ++i) {
    SpfExpr f = randomSpf(rng, 3);
    auto values = enumerateValues(f, sizes, leaves(2));
    std::size_t limit = std::min<std::size_t>(values.size(), 200);
    for (std::size_t k = 0; k < limit; ++k) {
      const SpfValue& v = values[k];
      auto parts = decompose(f, v);
      EXPECT_EQ(parts.size(), countLeaves(v)) << toString(f);
      for (const auto& [d, filler] : parts) EXPECT_EQ(conStep(f, d, filler), v) << toString(f);
    }
  }
}

TEST(SpfProperty, EveryHoleValueFillsToAValue) {
  Rng rng(0xF111);
  CarrierSizes sizes{{"Nat", 2}, {"Expr", 2}};
  for (int i = 0; i < 200; ++i) {
    SpfExpr f = randomSpf(rng, 3);
    auto values = enumerateValues(f, sizes, leaves(2));
    for (const auto& d : enumerateHoleValues(f, sizes, leaves(2))) {
      SpfValue filled = conStep(f, d, SpfValue::leafOf(Term::var(0)));
      EXPECT_NE(std::find(values.begin(), values.end(), filled), values.end()) << toString(f);
    }
  }
}

TEST(SpfProperty, LayerDecompositionsMatchPathOracle) {
  Rng rng(0xC0);
  for (const auto& name : languageNames()) {
    const LangDef& lang = language(name);
    GenBounds b;
    for (int i = 0; i < 50; ++i) {
      Term t = randomTerm(lang.signature, b, 6, rng, 1);
      auto ds = decompositions(lang.signature, t);
      auto byPath = oracle::subtermsByPath(t);
      ASSERT_EQ(ds.size(), byPath.size()) << name;
      for (std::size_t k = 0; k < ds.size(); ++k) {
        EXPECT_EQ(ds[k].first.size(), byPath[k].first.size()) << name;
        EXPECT_EQ(ds[k].second, byPath[k].second) << name;
        EXPECT_EQ(plug(lang.signature, ds[k].first, ds[k].second), t) << name;
      }
    }
  }
}

}  // namespace
}  // namespace gsos
