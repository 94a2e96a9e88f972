#include "gsos/state.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "gsos/error.hpp"
#include "gsos/hash.hpp"

namespace gsos {

Store::Store(std::initializer_list<Entry> entries) {
  for (const auto& [cell, value] : entries) set(cell, value);
}

Value Store::get(Cell cell) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), cell,
                             [](const Entry& e, Cell c) { return e.first < c; });
  return it != entries_.end() && it->first == cell ? it->second : 0;
}

void Store::set(Cell cell, Value value) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), cell,
                             [](const Entry& e, Cell c) { return e.first < c; });
  bool present = it != entries_.end() && it->first == cell;
  if (value == 0) {
    if (present) entries_.erase(it);
  } else if (present) {
    it->second = value;
  } else {
    entries_.insert(it, {cell, value});
  }
}

Store Store::with(Cell cell, Value value) const {
  Store copy = *this;
  copy.set(cell, value);
  return copy;
}

bool Store::hasNegative() const {
  return std::any_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second < 0; });
}

Store Store::toNat() const {
  Store out;
  for (const auto& e : entries_)
    if (e.second > 0) out.entries_.push_back(e);
  return out;
}

std::vector<Value> Store::take(Cell n) const {
  std::vector<Value> out(n, 0);
  for (const auto& [cell, value] : entries_) {
    if (cell >= n) break;
    out[cell] = value;
  }
  return out;
}

Store Store::drop(Cell n) const {
  Store out;
  for (const auto& [cell, value] : entries_)
    if (cell >= n) out.entries_.emplace_back(cell - n, value);
  return out;
}

Store Store::overrideWith(const std::vector<Value>& prefix) const {
  Store out;
  for (Cell c = 0; c < prefix.size(); ++c)
    if (prefix[c] != 0) out.entries_.emplace_back(c, prefix[c]);
  for (const auto& e : entries_)
    if (e.first >= prefix.size()) out.entries_.push_back(e);
  return out;
}

std::uint64_t Store::hash() const {
  std::uint64_t h = 0x5707e;
  for (const auto& [cell, value] : entries_)
    h = hashCombine(hashCombine(h, cell), static_cast<std::uint64_t>(value));
  return h;
}

const Store& MachineState::store() const { return std::get<Store>(v_); }
const PcState& MachineState::pcState() const { return std::get<PcState>(v_); }
const SpState& MachineState::spState() const { return std::get<SpState>(v_); }
const FrameStack& MachineState::frameStack() const { return std::get<FrameStack>(v_); }

std::uint64_t MachineState::hash() const {
  std::uint64_t h = hashCombine(0xa11ce, v_.index());
  switch (kind()) {
    case StateKind::Store:
      return hashCombine(h, store().hash());
    case StateKind::Pc:
      return hashCombine(hashCombine(h, pcState().store.hash()), static_cast<std::uint64_t>(pcState().pc));
    case StateKind::Sp:
      return hashCombine(hashCombine(h, spState().store.hash()), static_cast<std::uint64_t>(spState().sp));
    case StateKind::Frames:
      for (const auto& frame : frameStack().frames) {
        h = hashCombine(h, frame.size());
        for (Value v : frame) h = hashCombine(h, static_cast<std::uint64_t>(v));
      }
      return h;
  }
  return h;
}

std::string toString(const Store& s) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [cell, value] : s.entries()) {
    if (!first) out << ", ";
    first = false;
    out << cell << ':' << value;
  }
  out << '}';
  return out.str();
}

std::string toString(const MachineState& s) {
  switch (s.kind()) {
    case StateKind::Store:
      return toString(s.store());
    case StateKind::Pc:
      return "(" + toString(s.pcState().store) + ", " + std::to_string(s.pcState().pc) + ")";
    case StateKind::Sp:
      return "(" + toString(s.spState().store) + ", " + std::to_string(s.spState().sp) + ")";
    case StateKind::Frames: {
      std::ostringstream out;
      out << '[';
      const auto& frames = s.frameStack().frames;
      for (std::size_t i = 0; i < frames.size(); ++i) {
        if (i) out << ", ";
        out << '[';
        for (std::size_t j = 0; j < frames[i].size(); ++j) out << (j ? ", " : "") << frames[i][j];
        out << ']';
      }
      out << ']';
      return out.str();
    }
  }
  return "?";
}

namespace {

class StateParser {
 public:
  explicit StateParser(std::string_view text) : text_(text) {}

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skipSpace();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::int64_t integer() {
    skipSpace();
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("expected integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  Store store() {
    Store s;
    expect('{');
    if (peek('}')) {
      ++pos_;
      return s;
    }
    while (true) {
      std::int64_t cell = integer();
      if (cell < 0) fail("negative cell index");
      expect(':');
      s.set(static_cast<Cell>(cell), integer());
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect('}');
      return s;
    }
  }

  std::vector<Value> list() {
    std::vector<Value> out;
    expect('[');
    if (peek(']')) {
      ++pos_;
      return out;
    }
    while (true) {
      out.push_back(integer());
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect(']');
      return out;
    }
  }

  FrameStack frames() {
    FrameStack m;
    expect('[');
    if (peek(']')) {
      ++pos_;
      return m;
    }
    while (true) {
      m.frames.push_back(list());
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect(']');
      return m;
    }
  }

  void finish() {
    skipSpace();
    if (pos_ != text_.size()) fail("trailing input");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("state: " + what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

MachineState parseState(std::string_view text, StateKind kind) {
  StateParser p(text);
  MachineState out;
  switch (kind) {
    case StateKind::Store:
      out = p.store();
      break;
    case StateKind::Pc:
    case StateKind::Sp: {
      p.expect('(');
      Store s = p.store();
      p.expect(',');
      Value n = p.integer();
      p.expect(')');
      if (kind == StateKind::Pc) {
        out = PcState{std::move(s), n};
      } else {
        if (n < 0) p.fail("negative stack pointer");
        out = SpState{std::move(s), n};
      }
      break;
    }
    case StateKind::Frames:
      out = p.frames();
      break;
  }
  p.finish();
  return out;
}

}  // namespace gsos
