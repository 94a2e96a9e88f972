#include <gtest/gtest.h>

#include "gsos/error.hpp"
#include "gsos/generate.hpp"
#include "gsos/languages.hpp"
#include "gsos/syntax.hpp"

namespace gsos {
namespace {

using namespace build;

SpfExpr X() { return SpfExpr::id(); }
SpfExpr K(const std::string& c) { return SpfExpr::constant(c); }
SpfExpr sum(SpfExpr a, SpfExpr b) { return SpfExpr::sum(std::move(a), std::move(b)); }
SpfExpr prod(SpfExpr a, SpfExpr b) { return SpfExpr::product(std::move(a), std::move(b)); }

const Signature& whileSig() { return language("while").signature; }

TEST(Derive, IdentityIsOne) { EXPECT_EQ(derive(X()), SpfExpr::one()); }

TEST(Derive, ConstantIsZero) { EXPECT_EQ(derive(K("Expr")), SpfExpr::zero()); }

TEST(Derive, BinaryTreeIsTwoCopiesOfId) {
  // ∂(⊤ ⊎ Id × Id) ≅ K_Bool × Id; the pruned form is Id ⊎ Id.
  SpfExpr tree = sum(SpfExpr::one(), prod(X(), X()));
  SpfExpr d = derive(tree);
  EXPECT_EQ(d, sum(X(), X())) << toString(d);
  EXPECT_EQ(countPositions(d, {}, 3), 6u);
}

TEST(Derive, ProductRulePrunesUnitFactors) {
  SpfExpr f = prod(K("Nat"), X());
  EXPECT_EQ(derive(f), K("Nat")) << toString(derive(f));
}

TEST(Derive, ComposeChainRule) {
  SpfExpr f = SpfExpr::compose(prod(X(), X()), sum(X(), K("Nat")));
  SpfExpr d = derive(f);
  CarrierSizes sizes{{"Nat", 2}};
  // F X has (n + 2)² values with 2·n·(n + 2) marked positions in total,
  // so |∂F X| = 2·(n + 2).
  for (std::uint64_t n = 0; n <= 3; ++n) EXPECT_EQ(countPositions(d, sizes, n), 2 * (n + 2)) << n;
}

TEST(CountPositions, Examples) {
  EXPECT_EQ(countPositions(prod(X(), X()), {}, 3), 9u);
  EXPECT_EQ(countPositions(derive(prod(X(), X())), {}, 3), 6u);
  EXPECT_EQ(countPositions(SpfExpr::zero(), {}, 5), 0u);
  EXPECT_EQ(countPositions(K("Expr"), {{"Expr", 228}}, 0), 228u);
  EXPECT_THROW(countPositions(K("Inst"), {}, 1), UnknownName);
}

TEST(CountPositions, Saturates) {
  SpfExpr f = X();
  for (int i = 0; i < 8; ++i) f = prod(f, f);
  EXPECT_EQ(countPositions(f, {}, 1000), UINT64_MAX);
}

TEST(ConStep, SyntheticCompose) {
  SpfExpr f = SpfExpr::compose(prod(X(), X()), sum(X(), K("Nat")));
  std::vector<SpfValue> leaves{SpfValue::leafOf(Term::var(0)), SpfValue::leafOf(Term::var(1))};
  auto values = enumerateValues(f, {{"Nat", 2}}, leaves);
  EXPECT_EQ(values.size(), 16u);
  for (const auto& v : values) {
    auto parts = decompose(f, v);
    EXPECT_EQ(parts.size(), countLeaves(v));
    for (const auto& [d, x] : parts) EXPECT_EQ(conStep(f, d, x), v);
  }
}

TEST(ConStep, SeqLeftHole) {
  OneHoleLayer l{"while", Ctor::Seq, 0, {skip()}, {}};
  Term p = assign(0, Expr::lit(1));
  EXPECT_EQ(conStep(whileSig(), l, p), seq(p, skip()));
}

TEST(ConStep, WhileBody) {
  Expr e = Expr::var(0);
  OneHoleLayer l{"while", Ctor::While, 0, {}, {Payload(e)}};
  EXPECT_EQ(conStep(whileSig(), l, skip()), loopWhile(e, skip()));
}

TEST(ConStep, ObsBody) {
  const Signature& sig = language("while-flag").signature;
  OneHoleLayer l{"while-flag", Ctor::Obs, 0, {}, {Payload(Cell{3})}};
  EXPECT_EQ(conStep(sig, l, skip()), obs(3, skip()));
}

TEST(ConStep, RejectsForeignFiller) {
  OneHoleLayer l{"while", Ctor::Seq, 0, {skip()}, {}};
  EXPECT_THROW(conStep(whileSig(), l, frame()), LanguageMismatch);
}

TEST(Signature, SpfShape) {
  // skip ⊎ (Nat × Expr) ⊎ (Id × Id) ⊎ (Expr × Id)
  EXPECT_EQ(toString(whileSig().spf()), "(⊤ ⊎ ((K_Nat × K_Expr) ⊎ ((Id × Id) ⊎ (K_Expr × Id))))");
}

TEST(Signature, LayerRoundTrip) {
  Term layer = loopWhile(Expr::var(1), Term::var(0));
  SpfValue v = whileSig().toSpf(layer);
  EXPECT_EQ(whileSig().fromSpf(v), layer);
}

TEST(Signature, MembershipErrors) {
  EXPECT_NO_THROW(whileSig().checkMember(seq(skip(), Term::var(3))));
  EXPECT_THROW(whileSig().checkMember(frame()), LanguageMismatch);
  EXPECT_THROW(whileSig().checkMember(Term::node(Ctor::Seq, {}, {skip()})), LanguageMismatch);
  EXPECT_THROW(whileSig().checkMember(Term::node(Ctor::Assign, {Payload(Value{1}), Payload(Expr())}, {})),
               LanguageMismatch);
}

TEST(Plug, EmptyContextIsIdentity) {
  Term p = seq(skip(), skip());
  EXPECT_EQ(plug(whileSig(), {}, p), p);
}

TEST(Plug, SingleLayer) {
  Context c{OneHoleLayer{"while", Ctor::Seq, 0, {skip()}, {}}};
  EXPECT_EQ(plug(whileSig(), c, assign(0, Expr::lit(1))), seq(assign(0, Expr::lit(1)), skip()));
}

TEST(Plug, ObservationContext) {
  const Signature& sig = language("while-flag").signature;
  Term guard = loopWhile(Expr::bin(BinOp::Sub, Expr::var(1), Expr::lit(1)), skip());
  Context c{OneHoleLayer{"while-flag", Ctor::Seq, 0, {guard}, {}},
            OneHoleLayer{"while-flag", Ctor::Obs, 0, {}, {Payload(Cell{1})}}};
  Term a = loopWhile(Expr::var(0), assign(0, Expr::lit(0)));
  EXPECT_EQ(plug(sig, c, a), seq(obs(1, a), guard));
  EXPECT_EQ(pretty(c, sig), "obs 1 _ ; while (var 1 - 1) skip");
}

TEST(Plug, DecompositionsRoundTrip) {
  Term t = seq(loopWhile(Expr::var(0), skip()), assign(1, Expr::lit(2)));
  auto ds = decompositions(whileSig(), t);
  EXPECT_EQ(ds.size(), t.size());
  EXPECT_TRUE(ds.front().first.empty());
  for (const auto& [c, sub] : ds) EXPECT_EQ(plug(whileSig(), c, sub), t);
}

TEST(PlugMulti, Examples) {
  const Signature& sig = whileSig();
  Term p = assign(0, Expr::lit(1));
  EXPECT_EQ(plugMulti(sig, MultiHoleContext::holeCtx(), p), p);
  auto h = MultiHoleContext::holeCtx();
  EXPECT_EQ(plugMulti(sig, MultiHoleContext::layer(Ctor::Seq, {}, {h, h}), p), seq(p, p));
  Expr e = Expr::var(0);
  EXPECT_EQ(plugMulti(sig, MultiHoleContext::layer(Ctor::While, {Payload(e)}, {h}), p), loopWhile(e, p));
}

TEST(PlugMulti, AgreesWithSingleHole) {
  Context c{OneHoleLayer{"while", Ctor::Seq, 1, {skip()}, {}},
            OneHoleLayer{"while", Ctor::While, 0, {}, {Payload(Expr::var(0))}}};
  Term p = assign(0, Expr::lit(1));
  EXPECT_EQ(plugMulti(whileSig(), toMulti(c), p), plug(whileSig(), c, p));
  EXPECT_EQ(plugMulti(whileSig(), fromTerm(p), skip()), p);
}

TEST(SampleContexts, EmptyOnlyAtZeroLayers) {
  auto cs = sampleContexts(whileSig(), GenBounds{}, 0, 1, 7);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_TRUE(cs[0].empty());
}

TEST(SampleContexts, BudgetAndCompatibility) {
  auto cs = sampleContexts(whileSig(), GenBounds{}, 2, 100, 42);
  EXPECT_EQ(cs.size(), 100u);
  for (const auto& c : cs) {
    EXPECT_LE(c.size(), 2u);
    EXPECT_NO_THROW(whileSig().checkMember(plug(whileSig(), c, skip())));
  }
  EXPECT_EQ(cs, sampleContexts(whileSig(), GenBounds{}, 2, 100, 42));
}

}  // namespace
}  // namespace gsos
