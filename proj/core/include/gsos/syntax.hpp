#pragma once

#include <string>
#include <string_view>

#include "gsos/semantics.hpp"

namespace gsos {

// S-expression concrete syntax.
//
//   term  ::= skip | frame | return | ?xN
//           | (assign N expr) | (seq term term) | (while expr term)
//           | (obs N term) | (sandbox term) | (tonat term)
//           | (instr inst ... inst [tail]) | (seqc term term) | (loop expr term)
//   tail  ::= ?xN | (seqc ...) | (loop ...) | (instr ...)
//   inst  ::= nop | stop | (assign N expr) | (br expr Z)
//   expr  ::= (lit Z) | (var N) | (add e e) | (sub e e) | (mul e e)
//           | (lt e e) | (eq e e) | (min e e) | (not e)
Term parseTerm(std::string_view text);
// Parses and checks membership and well-formedness in `lang`.
Term parseTerm(std::string_view text, const LangDef& lang);
Expr parseExpr(std::string_view text);
Inst parseInst(std::string_view text);

std::string sexpr(const Term& t);
std::string sexpr(const Expr& e);
std::string sexpr(const Inst& i);

// Mathematical notation, e.g.
//   while (var 0 < 2) (1 := var 1 + 1)
//   br !(var 0 < 2) 3 ;; assign 1 (var 1 + 1) ;; br (lit 1) -2
std::string pretty(const Term& t);
std::string pretty(const Expr& e);
std::string pretty(const Inst& i);
// Context with its hole shown as `_`.
std::string pretty(const Context& c, const Signature& sig);

// `⇓ state` or `→ ⟨state, term⟩`, with the label when present.
std::string pretty(const StepOutcome& o);

}  // namespace gsos
