#include "gsos/semantics.hpp"

#include <deque>
#include <set>
#include <unordered_set>

#include "gsos/error.hpp"
#include "gsos/hash.hpp"

namespace gsos {

std::string_view divergenceName(Divergence d) {
  switch (d) {
    case Divergence::None: return "none";
    case Divergence::Label: return "label";
    case Divergence::State: return "state";
    case Divergence::ContinuationPresence: return "continuation-presence";
    case Divergence::ContinuationTerm: return "continuation-term";
  }
  return "?";
}

Divergence firstDivergence(const StepOutcome& a, const StepOutcome& b, bool compareTerms) {
  if (a.label != b.label) return Divergence::Label;
  if (!(a.state == b.state)) return Divergence::State;
  if (a.terminated() != b.terminated()) return Divergence::ContinuationPresence;
  if (compareTerms && !a.terminated() && !(*a.continuation == *b.continuation)) return Divergence::ContinuationTerm;
  return Divergence::None;
}

BehaviorTable::BehaviorTable(Generator gen, Domain domain) : gen_(std::move(gen)), domain_(std::move(domain)) {}

void BehaviorTable::set(const MachineState& in, StepOutcome out) { entries_[in] = std::move(out); }

bool BehaviorTable::covers(const MachineState& in) const {
  return widened_ || entries_.count(in) > 0 || (gen_ && (!domain_ || domain_(in)));
}

StepOutcome BehaviorTable::operator()(const MachineState& in) const {
  auto it = entries_.find(in);
  if (it != entries_.end()) return it->second;
  if (!gen_ || !(widened_ || !domain_ || domain_(in)))
    throw IncompleteTable("behavior table consulted outside its domain at " + toString(in));
  return gen_(in);
}

Env tableEnv(std::shared_ptr<const std::map<VarId, BehaviorTable>> tables) {
  return [tables = std::move(tables)](VarId x) -> ChildBehavior {
    auto it = tables->find(x);
    if (it == tables->end()) throw IncompleteTable("no behavior table for variable ?x" + std::to_string(x));
    const BehaviorTable* table = &it->second;
    return ChildBehavior{Term::var(x), [tables, table](const MachineState& s) { return (*table)(s); }};
  };
}

Env closedEnv() {
  return [](VarId x) -> ChildBehavior { throw IllFormed("unexpected variable ?x" + std::to_string(x)); };
}

StepOutcome applyLaw(const GsosLaw& law, const Term& layer, std::span<const ChildBehavior> kids, const MachineState& in) {
  if (layer.isVar()) throw IllFormed("applyLaw needs a constructor layer");
  if (kids.size() != layer.children().size()) throw IllFormed("child count mismatch in applyLaw");
  return law.rule(layer, kids, in);
}

namespace {

std::vector<ChildBehavior> childBehaviors(const GsosLaw& law, const Term& t, const Env& env) {
  std::vector<ChildBehavior> kids;
  kids.reserve(t.children().size());
  for (const auto& c : t.children()) {
    if (c.isVar()) {
      kids.push_back(env(c.varId()));
    } else {
      const GsosLaw* lp = &law;
      const Env* ep = &env;
      // The child's term is its substitution instance, so continuations the
      // rule builds from it are already flattened.
      Term inst = c.closed() ? c : c.substitute([ep](VarId x) { return (*ep)(x).term; });
      kids.push_back(ChildBehavior{std::move(inst), [lp, ep, c](const MachineState& s) { return extendLaw(*lp, c, *ep, s); }});
    }
  }
  return kids;
}

}  // namespace

StepOutcome extendLaw(const GsosLaw& law, const Term& t, const Env& env, const MachineState& in) {
  if (t.isVar()) return env(t.varId()).behavior(in);
  auto kids = childBehaviors(law, t, env);
  return law.rule(t, kids, in);
}

std::pair<Term, StepOutcome> extendLawWithTerm(const GsosLaw& law, const Term& t, const Env& env, const MachineState& in) {
  if (t.isVar()) {
    ChildBehavior cb = env(t.varId());
    return {cb.term, cb.behavior(in)};
  }
  auto kids = childBehaviors(law, t, env);
  std::vector<Term> terms;
  terms.reserve(kids.size());
  for (const auto& k : kids) terms.push_back(k.term);
  StepOutcome out = law.rule(t, kids, in);
  return {t.withChildren(std::move(terms)), std::move(out)};
}

StepOutcome step(const LangDef& lang, const Term& p, const MachineState& in) {
  if (!p.closed()) throw IllFormed("step needs a closed term");
  if (in.kind() != lang.inputKind) throw IllFormed("input state has the wrong shape for " + lang.name);
  lang.signature.checkMember(p);
  if (lang.wellFormed) lang.wellFormed(p);
  if (lang.wellFormedState) lang.wellFormedState(in);
  static const Env none = closedEnv();
  return extendLaw(lang.law, p, none, in);
}

RunResult run(const LangDef& lang, const Term& p, const MachineState& in, std::size_t fuel) {
  RunResult r;
  r.state = in;
  Term cur = p;
  for (std::size_t i = 0; i < fuel; ++i) {
    StepOutcome o = step(lang, cur, r.state);
    r.totalized += o.totalized ? 1 : 0;
    r.state = o.state;
    r.trace.push_back(o);
    if (o.terminated()) {
      r.terminated = true;
      return r;
    }
    cur = *o.continuation;
  }
  r.residual = cur;
  return r;
}

namespace {

std::shared_ptr<const BehaviorTree> unfoldFrom(const LangDef& lang, const Term& p, const std::vector<MachineState>& inputs,
                                               std::size_t depth) {
  auto tree = std::make_shared<BehaviorTree>();
  if (depth == 0) return tree;
  for (const auto& s : inputs) {
    StepOutcome o = step(lang, p, s);
    BehaviorTree::Branch b{s, o.state, o.label, o.terminated(), nullptr};
    if (!o.terminated() && depth > 1) b.next = unfoldFrom(lang, *o.continuation, inputs, depth - 1);
    tree->branches.push_back(std::move(b));
  }
  return tree;
}

struct PairKey {
  Term a;
  Term b;
  bool operator==(const PairKey& o) const { return a == o.a && b == o.b; }
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const { return static_cast<std::size_t>(hashCombine(k.a.hash(), k.b.hash())); }
};

}  // namespace

BehaviorTree unfold(const LangDef& lang, const Term& p, const std::vector<MachineState>& inputs, std::size_t depth) {
  return *unfoldFrom(lang, p, inputs, depth);
}

BisimResult checkBisimWith(const Stepper& stepper, const Term& p, const Term& q, const std::vector<MachineState>& inputs,
                           std::size_t depth) {
  BisimResult r;
  r.depth = depth;
  r.inputs = inputs.size();
  if (depth == 0) return r;

  struct Node {
    Term a;
    Term b;
    std::size_t level;
    std::ptrdiff_t parent;
    std::size_t input;  // index of the input that led here from the parent
  };
  std::vector<Node> nodes;
  std::unordered_set<PairKey, PairKeyHash> seen;
  nodes.push_back({p, q, 0, -1, 0});
  seen.insert({p, q});

  auto fillPath = [&](std::size_t at, std::size_t lastInput) {
    std::vector<std::size_t> chain;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(at); i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
      chain.push_back(static_cast<std::size_t>(i));
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const Node& n = nodes[*it];
      if (n.parent >= 0) r.path.push_back(inputs[n.input]);
      r.leftTerms.push_back(n.a);
      r.rightTerms.push_back(n.b);
    }
    r.path.push_back(inputs[lastInput]);
  };

  for (std::size_t at = 0; at < nodes.size(); ++at) {
    // Copy: `nodes` may reallocate below.
    Term a = nodes[at].a;
    Term b = nodes[at].b;
    std::size_t level = nodes[at].level;
    ++r.pairs;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      StepOutcome oa = stepper(a, inputs[i]);
      StepOutcome ob = stepper(b, inputs[i]);
      r.totalized += (oa.totalized ? 1 : 0) + (ob.totalized ? 1 : 0);
      Divergence d = firstDivergence(oa, ob, false);
      if (d != Divergence::None) {
        r.equivalent = false;
        r.divergence = d;
        r.left = std::move(oa);
        r.right = std::move(ob);
        fillPath(at, i);
        return r;
      }
      if (oa.terminated() || level + 1 >= depth) continue;
      PairKey key{*oa.continuation, *ob.continuation};
      if (key.a == key.b) continue;  // identical terms are trivially bisimilar
      if (seen.insert(key).second)
        nodes.push_back({key.a, key.b, level + 1, static_cast<std::ptrdiff_t>(at), i});
    }
  }
  return r;
}

BisimResult checkBisim(const LangDef& lang, const Term& p, const Term& q, const std::vector<MachineState>& inputs,
                       std::size_t depth) {
  Stepper s = [&lang](const Term& t, const MachineState& in) { return step(lang, t, in); };
  return checkBisimWith(s, p, q, inputs, depth);
}

BisimResult checkBisimOpen(const LangDef& lang, const Term& p, const Term& q, const Env& env,
                           const std::vector<MachineState>& inputs, std::size_t depth) {
  Stepper s = [&lang, &env](const Term& t, const MachineState& in) { return extendLaw(lang.law, t, env, in); };
  return checkBisimWith(s, p, q, inputs, depth);
}

}  // namespace gsos
