#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gsos/expr.hpp"

namespace gsos {

// Finitely-supported map Cell -> Value with default 0. Zero cells are never
// stored, so equality is support-wise equality.
class Store {
 public:
  using Entry = std::pair<Cell, Value>;

  Store() = default;
  Store(std::initializer_list<Entry> entries);

  Value get(Cell cell) const;
  void set(Cell cell, Value value);
  Store with(Cell cell, Value value) const;

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  // One past the highest nonzero cell.
  Cell extent() const { return entries_.empty() ? 0 : entries_.back().first + 1; }
  bool hasNegative() const;

  // Replaces every negative cell with 0.
  Store toNat() const;
  // The first n cells, as a dense vector.
  std::vector<Value> take(Cell n) const;
  // Cells [n, ...) shifted down to start at 0.
  Store drop(Cell n) const;
  // `prefix ++ drop(prefix.size()) this`.
  Store overrideWith(const std::vector<Value>& prefix) const;

  std::uint64_t hash() const;

  friend bool operator==(const Store&, const Store&) = default;
  friend auto operator<=>(const Store&, const Store&) = default;

 private:
  std::vector<Entry> entries_;
};

// Low: store plus program counter.
struct PcState {
  Store store;
  Value pc = 0;
  friend bool operator==(const PcState&, const PcState&) = default;
  friend auto operator<=>(const PcState&, const PcState&) = default;
};

// Stack: store plus stack pointer (number of live frames).
struct SpState {
  Store store;
  Value sp = 0;
  friend bool operator==(const SpState&, const SpState&) = default;
  friend auto operator<=>(const SpState&, const SpState&) = default;
};

using Frame = std::vector<Value>;

// While_B: stack of fixed-length frames, newest first.
struct FrameStack {
  std::vector<Frame> frames;
  friend bool operator==(const FrameStack&, const FrameStack&) = default;
  friend auto operator<=>(const FrameStack&, const FrameStack&) = default;
};

enum class StateKind : std::uint8_t { Store, Pc, Sp, Frames };

class MachineState {
 public:
  MachineState() = default;
  MachineState(Store s) : v_(std::move(s)) {}
  MachineState(PcState s) : v_(std::move(s)) {}
  MachineState(SpState s) : v_(std::move(s)) {}
  MachineState(FrameStack s) : v_(std::move(s)) {}

  StateKind kind() const { return static_cast<StateKind>(v_.index()); }

  const Store& store() const;
  const PcState& pcState() const;
  const SpState& spState() const;
  const FrameStack& frameStack() const;

  std::uint64_t hash() const;

  friend bool operator==(const MachineState&, const MachineState&) = default;
  friend bool operator<(const MachineState& a, const MachineState& b) { return a.v_ < b.v_; }

 private:
  std::variant<Store, PcState, SpState, FrameStack> v_;
};

std::string toString(const Store& s);
std::string toString(const MachineState& s);
// Parses `{0:1, 2:-3}`, `({0:1}, 2)`, or `[[1,2],[0,0]]` according to `kind`.
MachineState parseState(std::string_view text, StateKind kind);

}  // namespace gsos
