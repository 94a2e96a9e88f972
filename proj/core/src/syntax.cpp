#include "gsos/syntax.hpp"

#include <cctype>
#include <charconv>
#include <limits>

#include "gsos/error.hpp"

namespace gsos {

namespace {

constexpr VarId kHoleVar = std::numeric_limits<VarId>::max();

struct Sx {
  bool atom = true;
  std::string text;
  std::vector<Sx> items;
  std::size_t offset = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Sx readAll() {
    Sx s = read();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax: " + what + " at offset " + std::to_string(pos_));
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Sx read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    Sx s;
    s.offset = pos_;
    if (text_[pos_] == '(') {
      ++pos_;
      s.atom = false;
      while (true) {
        skip();
        if (pos_ >= text_.size()) fail("unbalanced '('");
        if (text_[pos_] == ')') {
          ++pos_;
          return s;
        }
        s.items.push_back(read());
      }
    }
    if (text_[pos_] == ')') fail("unexpected ')'");
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    s.text = std::string(text_.substr(start, pos_ - start));
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void bad(const Sx& s, const std::string& what) {
  throw ParseError("syntax: " + what + " at offset " + std::to_string(s.offset));
}

const std::string& head(const Sx& s) {
  if (s.atom || s.items.empty() || !s.items[0].atom) bad(s, "expected a form");
  return s.items[0].text;
}

void arity(const Sx& s, std::size_t n) {
  if (s.items.size() != n + 1) bad(s, "'" + head(s) + "' takes " + std::to_string(n) + " argument(s)");
}

std::int64_t integer(const Sx& s) {
  if (!s.atom) bad(s, "expected an integer");
  std::int64_t v = 0;
  const char* b = s.text.data();
  const char* e = b + s.text.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) bad(s, "expected an integer, got '" + s.text + "'");
  return v;
}

Cell natural(const Sx& s) {
  std::int64_t v = integer(s);
  if (v < 0) bad(s, "expected a natural number");
  return static_cast<Cell>(v);
}

Expr toExpr(const Sx& s) {
  const std::string& h = head(s);
  if (h == "lit") {
    arity(s, 1);
    return Expr::lit(integer(s.items[1]));
  }
  if (h == "var") {
    arity(s, 1);
    return Expr::var(natural(s.items[1]));
  }
  if (h == "not") {
    arity(s, 1);
    return Expr::un(UnOp::Not, toExpr(s.items[1]));
  }
  static const std::pair<const char*, BinOp> ops[] = {{"add", BinOp::Add}, {"sub", BinOp::Sub}, {"mul", BinOp::Mul},
                                                      {"lt", BinOp::Lt},   {"eq", BinOp::Eq},   {"min", BinOp::Min}};
  for (const auto& [name, op] : ops) {
    if (h == name) {
      arity(s, 2);
      return Expr::bin(op, toExpr(s.items[1]), toExpr(s.items[2]));
    }
  }
  bad(s, "unknown expression form '" + h + "'");
}

bool isInstForm(const Sx& s) {
  if (s.atom) return s.text == "nop" || s.text == "stop";
  if (s.items.empty() || !s.items[0].atom) return false;
  return s.items[0].text == "assign" || s.items[0].text == "br";
}

Inst toInst(const Sx& s) {
  if (s.atom) {
    if (s.text == "nop") return Inst::nop();
    if (s.text == "stop") return Inst::stop();
    bad(s, "unknown instruction '" + s.text + "'");
  }
  const std::string& h = head(s);
  if (h == "assign") {
    arity(s, 2);
    return Inst::assign(natural(s.items[1]), toExpr(s.items[2]));
  }
  if (h == "br") {
    arity(s, 2);
    return Inst::br(toExpr(s.items[1]), integer(s.items[2]));
  }
  bad(s, "unknown instruction '" + h + "'");
}

Term toTerm(const Sx& s) {
  if (s.atom) {
    if (s.text == "skip") return build::skip();
    if (s.text == "frame") return build::frame();
    if (s.text == "return") return build::ret();
    if (s.text.size() > 2 && s.text.rfind("?x", 0) == 0) {
      Sx n;
      n.text = s.text.substr(2);
      n.offset = s.offset;
      return Term::var(static_cast<VarId>(natural(n)));
    }
    bad(s, "unknown statement '" + s.text + "'");
  }
  const std::string& h = head(s);
  if (h == "assign") {
    arity(s, 2);
    return build::assign(natural(s.items[1]), toExpr(s.items[2]));
  }
  if (h == "seq") {
    arity(s, 2);
    return build::seq(toTerm(s.items[1]), toTerm(s.items[2]));
  }
  if (h == "while") {
    arity(s, 2);
    return build::loopWhile(toExpr(s.items[1]), toTerm(s.items[2]));
  }
  if (h == "obs") {
    arity(s, 2);
    return build::obs(natural(s.items[1]), toTerm(s.items[2]));
  }
  if (h == "sandbox") {
    arity(s, 1);
    return build::sandbox(toTerm(s.items[1]));
  }
  if (h == "tonat") {
    arity(s, 1);
    return build::toNat(toTerm(s.items[1]));
  }
  if (h == "seqc") {
    arity(s, 2);
    return build::seqc(toTerm(s.items[1]), toTerm(s.items[2]));
  }
  if (h == "loop") {
    arity(s, 2);
    return build::loop(toExpr(s.items[1]), toTerm(s.items[2]));
  }
  if (h == "instr") {
    if (s.items.size() < 2) bad(s, "'instr' needs at least one instruction");
    std::vector<Inst> insts;
    std::size_t n = s.items.size();
    bool hasTail = !isInstForm(s.items[n - 1]);
    for (std::size_t i = 1; i + (hasTail ? 1 : 0) < n; ++i) insts.push_back(toInst(s.items[i]));
    if (!hasTail) return build::program(insts);
    if (insts.empty()) bad(s, "'instr' needs at least one instruction before its tail");
    Term t = toTerm(s.items[n - 1]);
    for (auto it = insts.rbegin(); it != insts.rend(); ++it) t = build::instrSeq(*it, std::move(t));
    return t;
  }
  bad(s, "unknown statement form '" + h + "'");
}

std::string_view binSexpr(BinOp op) {
  switch (op) {
    case BinOp::Add: return "add";
    case BinOp::Sub: return "sub";
    case BinOp::Mul: return "mul";
    case BinOp::Lt: return "lt";
    case BinOp::Eq: return "eq";
    case BinOp::Min: return "min";
  }
  return "?";
}

std::string_view binSymbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Lt: return "<";
    case BinOp::Eq: return "==";
    case BinOp::Min: return "min";
  }
  return "?";
}

std::string varName(VarId x) { return x == kHoleVar ? "_" : "?x" + std::to_string(x); }

// Expression layouts: Free at statement level, Arg as an argument of a
// command or instruction, Inner as an operand of an infix operator.
enum class Mode { Free, Arg, Inner };

std::string prettyExpr(const Expr& e, Mode m) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      if (m == Mode::Inner) return std::to_string(e.literal());
      if (m == Mode::Arg) return "(lit " + std::to_string(e.literal()) + ")";
      return "lit " + std::to_string(e.literal());
    case Expr::Kind::Var:
      if (m == Mode::Arg) return "(var " + std::to_string(e.cell()) + ")";
      return "var " + std::to_string(e.cell());
    case Expr::Kind::Un:
      return "!" + prettyExpr(e.operand(), Mode::Arg);
    case Expr::Kind::Bin: {
      if (e.binOp() == BinOp::Min)
        return "min(" + prettyExpr(e.lhs(), Mode::Inner) + ", " + prettyExpr(e.rhs(), Mode::Inner) + ")";
      std::string body = prettyExpr(e.lhs(), Mode::Inner) + " " + std::string(binSymbol(e.binOp())) + " " +
                         prettyExpr(e.rhs(), Mode::Inner);
      return m == Mode::Free ? body : "(" + body + ")";
    }
  }
  return "?";
}

// Terms that need no parentheses as an operand.
bool atomic(const Term& t) {
  if (t.isVar()) return true;
  switch (t.ctor()) {
    case Ctor::Skip:
    case Ctor::Frame:
    case Ctor::Return:
    case Ctor::Sandbox:
    case Ctor::ToNat:
    case Ctor::Instr:
      return true;
    default:
      return false;
  }
}

std::string prettyTerm(const Term& t);

std::string operand(const Term& t) { return atomic(t) ? prettyTerm(t) : "(" + prettyTerm(t) + ")"; }

std::string prettyTerm(const Term& t) {
  if (t.isVar()) return varName(t.varId());
  const auto& k = t.children();
  switch (t.ctor()) {
    case Ctor::Skip: return "skip";
    case Ctor::Frame: return "frame";
    case Ctor::Return: return "return";
    case Ctor::Assign:
      return std::to_string(std::get<Cell>(t.payload()[0])) + " := " + prettyExpr(std::get<Expr>(t.payload()[1]), Mode::Free);
    case Ctor::Seq: {
      bool paren = !k[0].isVar() && k[0].ctor() == Ctor::Seq;
      return (paren ? "(" + prettyTerm(k[0]) + ")" : prettyTerm(k[0])) + " ; " + prettyTerm(k[1]);
    }
    case Ctor::While:
      return "while " + prettyExpr(std::get<Expr>(t.payload()[0]), Mode::Arg) + " " + operand(k[0]);
    case Ctor::Obs:
      return "obs " + std::to_string(std::get<Cell>(t.payload()[0])) + " " + operand(k[0]);
    case Ctor::Sandbox: return "⦃" + prettyTerm(k[0]) + "⦄";
    case Ctor::ToNat: return "⟨" + prettyTerm(k[0]) + "⟩";
    case Ctor::Instr: return pretty(std::get<Inst>(t.payload()[0]));
    case Ctor::InstrSeq: {
      const Term& rest = k[0];
      bool flat = rest.isVar() || rest.ctor() == Ctor::Instr || rest.ctor() == Ctor::InstrSeq;
      return pretty(std::get<Inst>(t.payload()[0])) + " ;; " + (flat ? prettyTerm(rest) : "(" + prettyTerm(rest) + ")");
    }
    case Ctor::SeqC:
      return operand(k[0]) + " ;;c " + operand(k[1]);
    case Ctor::Loop:
      return "loop " + prettyExpr(std::get<Expr>(t.payload()[0]), Mode::Arg) + " " + operand(k[0]);
  }
  return "?";
}

}  // namespace

Term parseTerm(std::string_view text) {
  Reader r(text);
  return toTerm(r.readAll());
}

Term parseTerm(std::string_view text, const LangDef& lang) {
  Term t = parseTerm(text);
  lang.signature.checkMember(t);
  if (lang.wellFormed) lang.wellFormed(t);
  return t;
}

Expr parseExpr(std::string_view text) {
  Reader r(text);
  return toExpr(r.readAll());
}

Inst parseInst(std::string_view text) {
  Reader r(text);
  return toInst(r.readAll());
}

std::string sexpr(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Lit: return "(lit " + std::to_string(e.literal()) + ")";
    case Expr::Kind::Var: return "(var " + std::to_string(e.cell()) + ")";
    case Expr::Kind::Un: return "(not " + sexpr(e.operand()) + ")";
    case Expr::Kind::Bin:
      return "(" + std::string(binSexpr(e.binOp())) + " " + sexpr(e.lhs()) + " " + sexpr(e.rhs()) + ")";
  }
  return "?";
}

std::string sexpr(const Inst& i) {
  switch (i.op) {
    case Inst::Op::Nop: return "nop";
    case Inst::Op::Stop: return "stop";
    case Inst::Op::Assign: return "(assign " + std::to_string(i.cell) + " " + sexpr(i.expr) + ")";
    case Inst::Op::Br: return "(br " + sexpr(i.expr) + " " + std::to_string(i.offset) + ")";
  }
  return "?";
}

std::string sexpr(const Term& t) {
  if (t.isVar()) return varName(t.varId());
  const auto& k = t.children();
  switch (t.ctor()) {
    case Ctor::Skip: return "skip";
    case Ctor::Frame: return "frame";
    case Ctor::Return: return "return";
    case Ctor::Assign:
      return "(assign " + std::to_string(std::get<Cell>(t.payload()[0])) + " " + sexpr(std::get<Expr>(t.payload()[1])) + ")";
    case Ctor::Seq: return "(seq " + sexpr(k[0]) + " " + sexpr(k[1]) + ")";
    case Ctor::While: return "(while " + sexpr(std::get<Expr>(t.payload()[0])) + " " + sexpr(k[0]) + ")";
    case Ctor::Obs: return "(obs " + std::to_string(std::get<Cell>(t.payload()[0])) + " " + sexpr(k[0]) + ")";
    case Ctor::Sandbox: return "(sandbox " + sexpr(k[0]) + ")";
    case Ctor::ToNat: return "(tonat " + sexpr(k[0]) + ")";
    case Ctor::SeqC: return "(seqc " + sexpr(k[0]) + " " + sexpr(k[1]) + ")";
    case Ctor::Loop: return "(loop " + sexpr(std::get<Expr>(t.payload()[0])) + " " + sexpr(k[0]) + ")";
    case Ctor::Instr:
    case Ctor::InstrSeq: {
      std::string out = "(instr";
      const Term* cur = &t;
      while (!cur->isVar() && cur->ctor() == Ctor::InstrSeq) {
        out += " " + sexpr(std::get<Inst>(cur->payload()[0]));
        cur = &cur->children()[0];
      }
      if (!cur->isVar() && cur->ctor() == Ctor::Instr)
        out += " " + sexpr(std::get<Inst>(cur->payload()[0]));
      else
        out += " " + sexpr(*cur);
      return out + ")";
    }
  }
  return "?";
}

std::string pretty(const Expr& e) { return prettyExpr(e, Mode::Free); }

std::string pretty(const Inst& i) {
  switch (i.op) {
    case Inst::Op::Nop: return "nop";
    case Inst::Op::Stop: return "stop";
    case Inst::Op::Assign: return "assign " + std::to_string(i.cell) + " " + prettyExpr(i.expr, Mode::Arg);
    case Inst::Op::Br: return "br " + prettyExpr(i.expr, Mode::Arg) + " " + std::to_string(i.offset);
  }
  return "?";
}

std::string pretty(const Term& t) { return prettyTerm(t); }

std::string pretty(const Context& c, const Signature& sig) { return prettyTerm(plug(sig, c, Term::var(kHoleVar))); }

std::string pretty(const StepOutcome& o) {
  std::string out = o.terminated() ? "⇓ " + toString(o.state) : "→ ⟨" + toString(o.state) + ", " + pretty(*o.continuation) + "⟩";
  if (o.label) out += " [" + std::to_string(*o.label) + "]";
  return out;
}

}  // namespace gsos
