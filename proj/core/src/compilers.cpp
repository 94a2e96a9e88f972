#include "gsos/compilers.hpp"

#include <mutex>

#include "gsos/error.hpp"

namespace gsos {

Term compile(const CompilerPair& cp, const Term& p) {
  if (cp.syntax.kind == SyntaxTranslation::Kind::WholeTerm) {
    if (!p.closed()) throw IllFormed(cp.name + " translates closed terms only");
    return cp.syntax.whole(p);
  }
  if (p.isVar()) return p;
  std::vector<Term> kids;
  kids.reserve(p.children().size());
  for (const auto& c : p.children()) kids.push_back(compile(cp, c));
  return cp.syntax.layer(p, std::move(kids));
}

Term translateLayer(const CompilerPair& cp, const Term& node) {
  if (cp.syntax.kind != SyntaxTranslation::Kind::LayerMap) throw IllFormed(cp.name + " is not layer-wise");
  if (node.isVar()) return node;
  std::vector<Term> vars;
  for (VarId i = 0; i < node.children().size(); ++i) vars.push_back(Term::var(i));
  return cp.syntax.layer(node, std::move(vars));
}

StepOutcome translateBehavior(const CompilerPair& cp, const Behavior& source, const MachineState& targetIn,
                              const std::function<Term(const Term&)>& compileCont) {
  if (cp.behavior.passThrough)
    if (auto o = cp.behavior.passThrough(targetIn)) return *o;
  StepOutcome o = source(cp.behavior.inputMap(targetIn));
  if (o.continuation) o.continuation = compileCont(*o.continuation);
  return cp.behavior.outputMap(targetIn, o);
}

namespace {

void flattenInto(const Term& p, std::vector<Inst>& out) {
  if (p.isVar()) throw IllFormed("cannot flatten an open term");
  switch (p.ctor()) {
    case Ctor::Skip:
      out.push_back(Inst::nop());
      return;
    case Ctor::Assign:
      out.push_back(Inst::assign(std::get<Cell>(p.payload()[0]), std::get<Expr>(p.payload()[1])));
      return;
    case Ctor::Seq:
      flattenInto(p.children()[0], out);
      flattenInto(p.children()[1], out);
      return;
    case Ctor::While: {
      std::vector<Inst> body;
      flattenInto(p.children()[0], body);
      Value n = static_cast<Value>(body.size());
      out.push_back(Inst::br(Expr::un(UnOp::Not, std::get<Expr>(p.payload()[0])), n + 2));
      out.insert(out.end(), body.begin(), body.end());
      out.push_back(Inst::br(Expr::lit(1), -(n + 1)));
      return;
    }
    default:
      throw IllFormed(std::string(ctorName(p.ctor())) + " is not a while statement");
  }
}

Term retagExprs(const Term& node, std::vector<Term> kids, const std::function<Expr(const Expr&)>& f) {
  std::vector<Payload> payload;
  for (const auto& p : node.payload()) {
    if (const auto* e = std::get_if<Expr>(&p))
      payload.emplace_back(f(*e));
    else
      payload.push_back(p);
  }
  return Term::node(node.ctor(), std::move(payload), std::move(kids));
}

Term identityLayer(const Term& node, std::vector<Term> kids) { return Term::node(node.ctor(), node.payload(), std::move(kids)); }

StepOutcome withLabelZero(const MachineState&, const StepOutcome& o) {
  StepOutcome out = o;
  out.label = 0;
  return out;
}

BehaviorTranslation flagBehavior() {
  return {nullptr, [](const MachineState& in) { return in; }, withLabelZero};
}

BehaviorTranslation identityBehavior() {
  return {nullptr, [](const MachineState& in) { return in; }, [](const MachineState&, const StepOutcome& o) { return o; }};
}

BehaviorTranslation intBehavior() {
  return {nullptr, [](const MachineState& in) { return MachineState(in.store().toNat()); },
          [](const MachineState&, const StepOutcome& o) { return o; }};
}

BehaviorTranslation lowBehavior() {
  BehaviorTranslation b;
  b.passThrough = [](const MachineState& in) -> std::optional<StepOutcome> {
    if (in.pcState().pc == 0) return std::nullopt;
    return StepOutcome{in, std::nullopt, std::nullopt, false};
  };
  b.inputMap = [](const MachineState& in) { return MachineState(in.pcState().store); };
  b.outputMap = [](const MachineState&, const StepOutcome& o) {
    StepOutcome out = o;
    out.state = PcState{o.state.store(), o.terminated() ? 1 : 0};
    return out;
  };
  return b;
}

BehaviorTranslation stackBehavior(Cell frameLen) {
  BehaviorTranslation b;
  b.inputMap = [frameLen](const MachineState& in) {
    return MachineState(divideStore(in.spState().store, in.spState().sp, frameLen));
  };
  b.outputMap = [](const MachineState& in, const StepOutcome& o) {
    StepOutcome out = o;
    const FrameStack& m = o.state.frameStack();
    out.state = SpState{overrideJoin(m, in.spState().store), static_cast<Value>(m.frames.size())};
    return out;
  };
  return b;
}

}  // namespace

std::vector<Inst> flattenToLow(const Term& p) {
  std::vector<Inst> out;
  flattenInto(p, out);
  return out;
}

Expr natToIntExpr(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
    case Expr::Kind::Var:
      return e;
    case Expr::Kind::Un:
      return Expr::un(e.unOp(), natToIntExpr(e.operand()));
    case Expr::Kind::Bin: {
      Expr a = natToIntExpr(e.lhs());
      Expr b = natToIntExpr(e.rhs());
      if (e.binOp() == BinOp::Sub) return Expr::bin(BinOp::Sub, a, Expr::bin(BinOp::Min, a, b));
      return Expr::bin(e.binOp(), a, b);
    }
  }
  return e;
}

FrameStack divideStore(const Store& s, Value sp, Cell frameLen) {
  FrameStack m;
  for (Value i = sp - 1; i >= 0; --i) m.frames.push_back(s.drop(frameLen * static_cast<Cell>(i)).take(frameLen));
  return m;
}

Store overrideJoin(const FrameStack& m, const Store& s) {
  std::vector<Value> joined;
  for (auto it = m.frames.rbegin(); it != m.frames.rend(); ++it) joined.insert(joined.end(), it->begin(), it->end());
  return s.overrideWith(joined);
}

std::vector<CompilerPair> makeCompilerRegistry(Cell frameLen) {
  std::vector<CompilerPair> reg;
  auto layerMap = [](std::function<Term(const Term&, std::vector<Term>)> f) {
    return SyntaxTranslation{SyntaxTranslation::Kind::LayerMap, std::move(f), nullptr};
  };

  reg.push_back({"embed-flag", "while", "while-flag", layerMap(identityLayer), flagBehavior()});
  reg.push_back({"sandbox", "while", "while-sec",
                 layerMap([](const Term& n, std::vector<Term> k) { return build::sandbox(identityLayer(n, std::move(k))); }),
                 flagBehavior()});
  reg.push_back({"unsandbox", "while-sec", "while-sec", layerMap([](const Term& n, std::vector<Term> k) {
                   if (n.ctor() == Ctor::Sandbox) return k[0];
                   return identityLayer(n, std::move(k));
                 }),
                 identityBehavior()});
  reg.push_back({"embed-int", "while", "while-int",
                 layerMap([](const Term& n, std::vector<Term> k) { return retagExprs(n, std::move(k), natToIntExpr); }),
                 intBehavior()});
  reg.push_back({"sandbox-int", "while", "while-int", layerMap([](const Term& n, std::vector<Term> k) {
                   return build::toNat(retagExprs(n, std::move(k), natToIntExpr));
                 }),
                 intBehavior()});
  reg.push_back({"flatten-low", "while", "low",
                 SyntaxTranslation{SyntaxTranslation::Kind::WholeTerm, nullptr,
                                   [](const Term& p) { return build::program(flattenToLow(p)); }},
                 lowBehavior()});
  reg.push_back({"embed-low-sec", "while", "low-sec", layerMap([](const Term& n, std::vector<Term> k) -> Term {
                   switch (n.ctor()) {
                     case Ctor::Skip: return build::instr(Inst::stop());
                     case Ctor::Assign:
                       return build::instr(Inst::assign(std::get<Cell>(n.payload()[0]), std::get<Expr>(n.payload()[1])));
                     case Ctor::Seq: return build::seqc(k[0], k[1]);
                     case Ctor::While: return build::loop(std::get<Expr>(n.payload()[0]), k[0]);
                     default: throw IllFormed(std::string(ctorName(n.ctor())) + " is not a while statement");
                   }
                 }),
                 lowBehavior()});
  reg.push_back({"embed-stack", "while-b", "stack", layerMap(identityLayer), stackBehavior(frameLen)});
  reg.push_back({"embed-stack-clear", "while-b", "stack-clear", layerMap(identityLayer), stackBehavior(frameLen)});
  return reg;
}

const CompilerPair& compiler(const std::string& name, Cell frameLen) {
  static std::mutex mu;
  static std::map<Cell, std::vector<CompilerPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(frameLen);
  if (it == cache.end()) it = cache.emplace(frameLen, makeCompilerRegistry(frameLen)).first;
  for (const auto& cp : it->second)
    if (cp.name == name) return cp;
  throw UnknownName("unknown compiler: " + name);
}

std::vector<std::string> compilerNames() {
  return {"embed-flag", "sandbox", "unsandbox", "embed-int", "sandbox-int",
          "flatten-low", "embed-low-sec", "embed-stack", "embed-stack-clear"};
}

}  // namespace gsos
