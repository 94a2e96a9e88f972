#include "gsos/languages.hpp"

#include <mutex>

#include "gsos/error.hpp"

namespace gsos {

Value eval(const Store& s, const Expr& e) {
  return evaluate(e, [&s](Cell l) { return s.get(l); }, true);
}

Value evalInt(const Store& s, const Expr& e) {
  return evaluate(e, [&s](Cell l) { return s.get(l); }, false);
}

namespace {

void checkFrameIndex(const Expr& e, Cell frameLen) {
  if (e.maxCell() >= static_cast<std::int64_t>(frameLen))
    throw IllFormed("var index " + std::to_string(e.maxCell()) + " is outside a frame of length " + std::to_string(frameLen));
}

Cell frameBase(Value sp, Cell frameLen) { return frameLen * static_cast<Cell>(sp - 1); }

}  // namespace

Value evalFrames(const FrameStack& m, const Expr& e, Cell frameLen) {
  checkFrameIndex(e, frameLen);
  if (m.frames.empty()) return evaluate(e, [](Cell) { return Value{0}; }, true);
  const Frame& top = m.frames.front();
  return evaluate(e, [&top](Cell l) { return l < top.size() ? top[l] : Value{0}; }, true);
}

Value evalSP(const Store& s, Value sp, const Expr& e, Cell frameLen) {
  checkFrameIndex(e, frameLen);
  if (sp <= 0) {
    if (e.maxCell() >= 0) throw IllFormed("variable read with no live frame (sp = 0)");
    return eval(s, e);
  }
  Cell base = frameBase(sp, frameLen);
  return evaluate(e, [&s, base](Cell l) { return s.get(base + l); }, true);
}

Store update(const Store& s, Cell l, Value v) { return s.with(l, v); }

FrameStack updateFrames(const FrameStack& m, Cell l, Value v, Cell frameLen) {
  if (l >= frameLen) throw IllFormed("assignment to cell " + std::to_string(l) + " outside a frame");
  if (m.frames.empty()) return m;
  FrameStack out = m;
  out.frames.front().at(l) = v;
  return out;
}

Store updateSP(const Store& s, Value sp, Cell l, Value v, Cell frameLen) {
  if (l >= frameLen) throw IllFormed("assignment to cell " + std::to_string(l) + " outside a frame");
  if (sp <= 0) throw IllFormed("assignment with no live frame (sp = 0)");
  return s.with(frameBase(sp, frameLen) + l, v);
}

Store toNatStore(const Store& s) { return s.toNat(); }

std::size_t programLength(const Term& t) {
  std::size_t n = 1;
  const Term* cur = &t;
  while (!cur->isVar() && cur->ctor() == Ctor::InstrSeq) {
    ++n;
    cur = &cur->children()[0];
  }
  return n;
}

namespace {

using Kids = std::span<const ChildBehavior>;

StepOutcome done(MachineState s, std::optional<Value> label = std::nullopt, bool totalized = false) {
  return StepOutcome{std::move(s), label, std::nullopt, totalized};
}

StepOutcome go(MachineState s, Term k, std::optional<Value> label = std::nullopt, bool totalized = false) {
  return StepOutcome{std::move(s), label, std::move(k), totalized};
}

// The layer rebuilt over its (flattened) child terms.
Term self(const Term& t, Kids kids) {
  if (t.closed()) return t;
  std::vector<Term> terms;
  for (const auto& k : kids) terms.push_back(k.term);
  return t.withChildren(std::move(terms));
}

Cell natPayload(const Term& t, std::size_t i) { return std::get<Cell>(t.payload().at(i)); }
const Expr& exprPayload(const Term& t, std::size_t i) { return std::get<Expr>(t.payload().at(i)); }
const Inst& instPayload(const Term& t) { return std::get<Inst>(t.payload().at(0)); }

[[noreturn]] void noRule(const Term& t, const std::string& lang) {
  throw IllFormed(std::string(ctorName(t.ctor())) + " has no rule in " + lang);
}

// Sequencing shared by every While-style language: `first` is the left
// child's outcome, already computed.
StepOutcome sequence(const StepOutcome& first, const Term& q) {
  if (first.terminated()) return go(first.state, q, first.label, first.totalized);
  return go(first.state, build::seq(*first.continuation, q), first.label, first.totalized);
}

struct WhileFamily {
  std::string name;
  bool natural = true;
  bool labelled = false;

  StepOutcome operator()(const Term& t, Kids kids, const MachineState& in) const {
    const Store& s = in.store();
    std::optional<Value> zero = labelled ? std::optional<Value>(0) : std::nullopt;
    switch (t.ctor()) {
      case Ctor::Skip:
        return done(s, zero);
      case Ctor::Assign: {
        Value v = natural ? eval(s, exprPayload(t, 1)) : evalInt(s, exprPayload(t, 1));
        return done(update(s, natPayload(t, 0), v), labelled ? std::optional<Value>(v) : std::nullopt);
      }
      case Ctor::Seq:
        return sequence(kids[0].behavior(in), kids[1].term);
      case Ctor::While: {
        Value v = natural ? eval(s, exprPayload(t, 0)) : evalInt(s, exprPayload(t, 0));
        std::optional<Value> label = labelled ? std::optional<Value>(v) : std::nullopt;
        if (v != 0) return go(s, build::seq(kids[0].term, self(t, kids)), label);
        return go(s, build::skip(), label);
      }
      case Ctor::Obs: {
        if (!labelled) noRule(t, name);
        Cell n = natPayload(t, 0);
        StepOutcome o = kids[0].behavior(in);
        Value v = o.label.value_or(0);
        Store logged = update(o.state.store(), n, v);
        if (o.terminated()) return go(logged, build::skip(), v, o.totalized);
        return go(logged, build::obs(n + 1, *o.continuation), v, o.totalized);
      }
      case Ctor::Sandbox: {
        if (!labelled) noRule(t, name);
        StepOutcome o = kids[0].behavior(in);
        o.label = 0;
        if (!o.terminated()) o.continuation = build::sandbox(*o.continuation);
        return o;
      }
      case Ctor::ToNat: {
        StepOutcome o = kids[0].behavior(MachineState(toNatStore(s)));
        if (!o.terminated()) o.continuation = build::toNat(*o.continuation);
        return o;
      }
      default:
        noRule(t, name);
    }
  }
};

struct LowFamily {
  std::string name;
  bool secure = false;

  // The instruction at pc 0; `program` is the whole layer term.
  StepOutcome head(const Inst& i, bool singleton, const Store& s, const Term& program) const {
    switch (i.op) {
      case Inst::Op::Stop:
        return done(PcState{s, secure && singleton ? 1 : 0});
      case Inst::Op::Nop:
        return go(PcState{s, 1}, program);
      case Inst::Op::Assign: {
        Store out = update(s, i.cell, eval(s, i.expr));
        if (secure && singleton) return done(PcState{std::move(out), 1});
        return go(PcState{std::move(out), 1}, program);
      }
      case Inst::Op::Br: {
        Value v = eval(s, i.expr);
        return go(PcState{s, v == 0 ? 1 : i.offset}, program);
      }
    }
    return done(PcState{s, 0});
  }

  StepOutcome operator()(const Term& t, Kids kids, const MachineState& in) const {
    const Store& s = in.pcState().store;
    Value pc = in.pcState().pc;
    switch (t.ctor()) {
      case Ctor::Instr:
        if (pc != 0) return done(in);
        return head(instPayload(t), true, s, t);
      case Ctor::InstrSeq: {
        if (pc < 0) return done(in);
        if (pc == 0) return head(instPayload(t), false, s, self(t, kids));
        StepOutcome o = kids[0].behavior(PcState{s, pc - 1});
        PcState shifted{o.state.pcState().store, o.state.pcState().pc + 1};
        if (o.terminated()) return done(shifted, std::nullopt, o.totalized);
        return go(shifted, build::instrSeq(instPayload(t), *o.continuation), std::nullopt, o.totalized);
      }
      case Ctor::SeqC: {
        if (!secure) noRule(t, name);
        if (pc != 0) return done(in);
        StepOutcome o = kids[0].behavior(in);
        PcState reset{o.state.pcState().store, 0};
        if (o.terminated()) return go(reset, kids[1].term, std::nullopt, o.totalized);
        return go(reset, build::seqc(*o.continuation, kids[1].term), std::nullopt, o.totalized);
      }
      case Ctor::Loop: {
        if (!secure) noRule(t, name);
        if (pc != 0) return done(in);
        if (eval(s, exprPayload(t, 0)) == 0) return go(in, build::instr(Inst::stop()));
        return go(in, build::seqc(kids[0].term, self(t, kids)));
      }
      default:
        noRule(t, name);
    }
  }
};

struct FramesFamily {
  Cell frameLen = kDefaultFrameLen;

  StepOutcome operator()(const Term& t, Kids kids, const MachineState& in) const {
    const FrameStack& m = in.frameStack();
    bool empty = m.frames.empty();
    switch (t.ctor()) {
      case Ctor::Skip:
        return done(m);
      case Ctor::Assign: {
        const Expr& e = exprPayload(t, 1);
        Value v = evalFrames(m, e, frameLen);
        return done(updateFrames(m, natPayload(t, 0), v, frameLen), std::nullopt, empty);
      }
      case Ctor::Seq:
        return sequence(kids[0].behavior(in), kids[1].term);
      case Ctor::While: {
        const Expr& e = exprPayload(t, 0);
        Value v = evalFrames(m, e, frameLen);
        bool tot = empty && e.maxCell() >= 0;
        if (v != 0) return go(m, build::seq(kids[0].term, self(t, kids)), std::nullopt, tot);
        return go(m, build::skip(), std::nullopt, tot);
      }
      case Ctor::Frame: {
        FrameStack out = m;
        out.frames.insert(out.frames.begin(), Frame(frameLen, 0));
        return done(std::move(out));
      }
      case Ctor::Return: {
        if (empty) return done(m, std::nullopt, true);
        FrameStack out = m;
        out.frames.erase(out.frames.begin());
        return done(std::move(out));
      }
      default:
        noRule(t, "while-b");
    }
  }
};

struct StackFamily {
  std::string name;
  Cell frameLen = kDefaultFrameLen;
  bool clearing = false;

  Value read(const Store& s, Value sp, const Expr& e) const {
    if (sp <= 0) return evaluate(e, [](Cell) { return Value{0}; }, true);
    return evalSP(s, sp, e, frameLen);
  }

  StepOutcome operator()(const Term& t, Kids kids, const MachineState& in) const {
    const Store& s = in.spState().store;
    Value sp = in.spState().sp;
    switch (t.ctor()) {
      case Ctor::Skip:
        return done(in);
      case Ctor::Assign: {
        const Expr& e = exprPayload(t, 1);
        checkFrameIndex(e, frameLen);
        Cell l = natPayload(t, 0);
        if (l >= frameLen) throw IllFormed("assignment to cell " + std::to_string(l) + " outside a frame");
        if (sp <= 0) return done(in, std::nullopt, true);
        return done(SpState{updateSP(s, sp, l, read(s, sp, e), frameLen), sp});
      }
      case Ctor::Seq:
        return sequence(kids[0].behavior(in), kids[1].term);
      case Ctor::While: {
        const Expr& e = exprPayload(t, 0);
        checkFrameIndex(e, frameLen);
        bool tot = sp <= 0 && e.maxCell() >= 0;
        if (read(s, sp, e) != 0) return go(in, build::seq(kids[0].term, self(t, kids)), std::nullopt, tot);
        return go(in, build::skip(), std::nullopt, tot);
      }
      case Ctor::Frame: {
        if (!clearing) return done(SpState{s, sp + 1});
        Store out = s;
        Cell base = frameLen * static_cast<Cell>(sp);
        for (Cell l = 0; l < frameLen; ++l) out.set(base + l, 0);
        return done(SpState{std::move(out), sp + 1});
      }
      case Ctor::Return:
        if (sp <= 0) return done(in, std::nullopt, true);
        return done(SpState{s, sp - 1});
      default:
        noRule(t, name);
    }
  }
};

CtorSig sig(Ctor c, std::string name, std::vector<Field> fields) { return CtorSig{c, std::move(name), std::move(fields)}; }

std::vector<CtorSig> whileCtors(Carrier expr) {
  return {sig(Ctor::Skip, "skip", {}),
          sig(Ctor::Assign, ":=", {Field::of(Carrier::Nat), Field::of(expr)}),
          sig(Ctor::Seq, ";", {Field::id(), Field::id()}),
          sig(Ctor::While, "while", {Field::of(expr), Field::id()})};
}

void forEachNode(const Term& t, const std::function<void(const Term&)>& f) {
  if (t.isVar()) return;
  f(t);
  for (const auto& c : t.children()) forEachNode(c, f);
}

void requireNatExpr(const Expr& e) {
  if (e.minLiteral() < 0) throw IllFormed("negative literal in a natural-valued language");
}

void natTerm(const Term& t) {
  forEachNode(t, [](const Term& n) {
    for (const auto& p : n.payload()) {
      if (const auto* e = std::get_if<Expr>(&p)) requireNatExpr(*e);
      if (const auto* i = std::get_if<Inst>(&p)) requireNatExpr(i->expr);
    }
  });
}

void natStore(const Store& s) {
  if (s.hasNegative()) throw IllFormed("negative cell in a natural-valued store");
}

}  // namespace

std::map<std::string, LangDef> makeLanguageRegistry(Cell frameLen) {
  std::map<std::string, LangDef> reg;

  auto natStoreCheck = [](const MachineState& st) { natStore(st.store()); };
  auto pcStoreCheck = [](const MachineState& st) { natStore(st.pcState().store); };

  {
    LangDef d;
    d.name = "while";
    d.signature = Signature("while", whileCtors(Carrier::Expr));
    d.inputKind = StateKind::Store;
    d.law = GsosLaw{"while", WhileFamily{"while", true, false}};
    d.wellFormed = natTerm;
    d.wellFormedState = natStoreCheck;
    reg.emplace(d.name, d);
  }
  {
    auto ctors = whileCtors(Carrier::Expr);
    ctors.push_back(sig(Ctor::Obs, "obs", {Field::of(Carrier::Nat), Field::id()}));
    LangDef d;
    d.name = "while-flag";
    d.signature = Signature("while-flag", ctors);
    d.inputKind = StateKind::Store;
    d.hasLabel = true;
    d.law = GsosLaw{"while-flag", WhileFamily{"while-flag", true, true}};
    d.wellFormed = natTerm;
    d.wellFormedState = natStoreCheck;
    reg.emplace(d.name, d);

    ctors.push_back(sig(Ctor::Sandbox, "sandbox", {Field::id()}));
    d.name = "while-sec";
    d.signature = Signature("while-sec", ctors);
    d.law = GsosLaw{"while-sec", WhileFamily{"while-sec", true, true}};
    reg.emplace(d.name, d);
  }
  {
    auto ctors = whileCtors(Carrier::IntExpr);
    ctors.push_back(sig(Ctor::ToNat, "tonat", {Field::id()}));
    LangDef d;
    d.name = "while-int";
    d.signature = Signature("while-int", ctors);
    d.inputKind = StateKind::Store;
    d.law = GsosLaw{"while-int", WhileFamily{"while-int", false, false}};
    d.wellFormed = [](const Term&) {};
    d.wellFormedState = [](const MachineState&) {};
    reg.emplace(d.name, d);
  }
  {
    std::vector<CtorSig> ctors{sig(Ctor::Instr, "instr", {Field::of(Carrier::Inst)}),
                               sig(Ctor::InstrSeq, "instr;;", {Field::of(Carrier::Inst), Field::id()})};
    LangDef d;
    d.name = "low";
    d.signature = Signature("low", ctors);
    d.inputKind = StateKind::Pc;
    d.law = GsosLaw{"low", LowFamily{"low", false}};
    d.wellFormed = natTerm;
    d.wellFormedState = pcStoreCheck;
    reg.emplace(d.name, d);

    ctors.push_back(sig(Ctor::SeqC, ";;c", {Field::id(), Field::id()}));
    ctors.push_back(sig(Ctor::Loop, "loop", {Field::of(Carrier::Expr), Field::id()}));
    d.name = "low-sec";
    d.signature = Signature("low-sec", ctors);
    d.law = GsosLaw{"low-sec", LowFamily{"low-sec", true}};
    reg.emplace(d.name, d);
  }
  {
    auto ctors = whileCtors(Carrier::Expr);
    ctors.push_back(sig(Ctor::Frame, "frame", {}));
    ctors.push_back(sig(Ctor::Return, "return", {}));
    auto frameTerm = [frameLen](const Term& t) {
      natTerm(t);
      forEachNode(t, [frameLen](const Term& n) {
        for (const auto& p : n.payload())
          if (const auto* e = std::get_if<Expr>(&p)) checkFrameIndex(*e, frameLen);
        if (n.ctor() == Ctor::Assign && natPayload(n, 0) >= frameLen)
          throw IllFormed("assignment to cell " + std::to_string(natPayload(n, 0)) + " outside a frame");
      });
    };

    LangDef d;
    d.name = "while-b";
    d.signature = Signature("while-b", ctors);
    d.inputKind = StateKind::Frames;
    d.law = GsosLaw{"while-b", FramesFamily{frameLen}};
    d.wellFormed = frameTerm;
    d.wellFormedState = [frameLen](const MachineState& st) {
      for (const auto& f : st.frameStack().frames) {
        if (f.size() != frameLen) throw IllFormed("frame of length " + std::to_string(f.size()) + ", expected " + std::to_string(frameLen));
        for (Value v : f)
          if (v < 0) throw IllFormed("negative value in a frame");
      }
    };
    reg.emplace(d.name, d);

    auto spCheck = [](const MachineState& st) {
      natStore(st.spState().store);
      if (st.spState().sp < 0) throw IllFormed("negative stack pointer");
    };
    d.name = "stack";
    d.signature = Signature("stack", ctors);
    d.inputKind = StateKind::Sp;
    d.law = GsosLaw{"stack", StackFamily{"stack", frameLen, false}};
    d.wellFormedState = spCheck;
    reg.emplace(d.name, d);

    d.name = "stack-clear";
    d.signature = Signature("stack-clear", ctors);
    d.law = GsosLaw{"stack-clear", StackFamily{"stack-clear", frameLen, true}};
    reg.emplace(d.name, d);
  }
  return reg;
}

const LangDef& language(const std::string& name, Cell frameLen) {
  static std::mutex mu;
  static std::map<Cell, std::map<std::string, LangDef>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(frameLen);
  if (it == cache.end()) it = cache.emplace(frameLen, makeLanguageRegistry(frameLen)).first;
  auto found = it->second.find(name);
  if (found == it->second.end()) throw UnknownName("unknown language: " + name);
  return found->second;
}

std::vector<std::string> languageNames() {
  return {"while", "while-flag", "while-sec", "while-int", "low", "low-sec", "while-b", "stack", "stack-clear"};
}

}  // namespace gsos
