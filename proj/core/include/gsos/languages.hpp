#pragma once

#include <map>
#include <string>
#include <vector>

#include "gsos/semantics.hpp"

namespace gsos {

constexpr Cell kDefaultFrameLen = 2;

// Natural-valued evaluation (truncated subtraction).
Value eval(const Store& s, const Expr& e);
// Integer-valued evaluation.
Value evalInt(const Store& s, const Expr& e);
// Reads the head frame; on the empty stack every variable reads 0.
// Throws IllFormed if a var index is >= frameLen.
Value evalFrames(const FrameStack& m, const Expr& e, Cell frameLen);
// `var l` reads cell l + frameLen * (sp - 1). Throws IllFormed when sp = 0
// and e reads a variable, or a var index is >= frameLen.
Value evalSP(const Store& s, Value sp, const Expr& e, Cell frameLen);

Store update(const Store& s, Cell l, Value v);
// Writes the head frame; identity on the empty stack.
FrameStack updateFrames(const FrameStack& m, Cell l, Value v, Cell frameLen);
Store updateSP(const Store& s, Value sp, Cell l, Value v, Cell frameLen);

// Store replaced by its nonnegative part.
Store toNatStore(const Store& s);

// Names: while, while-flag, while-sec, while-int, low, low-sec, while-b,
// stack, stack-clear.
std::map<std::string, LangDef> makeLanguageRegistry(Cell frameLen = kDefaultFrameLen);

// Cached registry lookup. Throws UnknownName.
const LangDef& language(const std::string& name, Cell frameLen = kDefaultFrameLen);
std::vector<std::string> languageNames();

// Number of top-level instructions of a Low program (1 for any other node).
std::size_t programLength(const Term& t);

}  // namespace gsos
