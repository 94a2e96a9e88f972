#include "gsos/expr.hpp"

#include <algorithm>
#include <limits>

#include "gsos/hash.hpp"

namespace gsos {

struct Expr::Node {
  Kind kind = Kind::Lit;
  Value literal = 0;
  Cell cell = 0;
  BinOp bin = BinOp::Add;
  UnOp un = UnOp::Not;
  Expr lhs{nullptr};
  Expr rhs{nullptr};
  std::size_t depth = 1;
  std::int64_t maxCell = -1;
  Value minLiteral = std::numeric_limits<Value>::max();
  std::uint64_t hash = 0;
};

Expr::Expr() : Expr(lit(0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::lit(Value n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Lit;
  node->literal = n;
  node->minLiteral = n;
  node->hash = hashCombine(0x11, static_cast<std::uint64_t>(n));
  return Expr(std::move(node));
}

Expr Expr::var(Cell l) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Var;
  node->cell = l;
  node->maxCell = static_cast<std::int64_t>(l);
  node->hash = hashCombine(0x22, l);
  return Expr(std::move(node));
}

Expr Expr::bin(BinOp op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Bin;
  node->bin = op;
  node->depth = 1 + std::max(lhs.depth(), rhs.depth());
  node->maxCell = std::max(lhs.maxCell(), rhs.maxCell());
  node->minLiteral = std::min(lhs.minLiteral(), rhs.minLiteral());
  node->hash = hashCombine(hashCombine(0x33 + static_cast<std::uint64_t>(op), lhs.hash()), rhs.hash());
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return Expr(std::move(node));
}

Expr Expr::un(UnOp op, Expr operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Un;
  node->un = op;
  node->depth = 1 + operand.depth();
  node->maxCell = operand.maxCell();
  node->minLiteral = operand.minLiteral();
  node->hash = hashCombine(0x44 + static_cast<std::uint64_t>(op), operand.hash());
  node->lhs = std::move(operand);
  return Expr(std::move(node));
}

Expr::Kind Expr::kind() const { return node_->kind; }
Value Expr::literal() const { return node_->literal; }
Cell Expr::cell() const { return node_->cell; }
BinOp Expr::binOp() const { return node_->bin; }
UnOp Expr::unOp() const { return node_->un; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }
std::size_t Expr::depth() const { return node_->depth; }
std::int64_t Expr::maxCell() const { return node_->maxCell; }
Value Expr::minLiteral() const { return node_->minLiteral; }
std::uint64_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Expr::Kind::Lit:
      return a.literal() <=> b.literal();
    case Expr::Kind::Var:
      return a.cell() <=> b.cell();
    case Expr::Kind::Bin:
      if (auto c = a.binOp() <=> b.binOp(); c != 0) return c;
      if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
      return a.rhs() <=> b.rhs();
    case Expr::Kind::Un:
      if (auto c = a.unOp() <=> b.unOp(); c != 0) return c;
      return a.operand() <=> b.operand();
  }
  return std::strong_ordering::equal;
}

std::string_view binOpName(BinOp op) {
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

std::string_view unOpName(UnOp op) {
  switch (op) {
    case UnOp::Not: return "not";
  }
  return "?";
}

namespace {

constexpr Value kMax = std::numeric_limits<Value>::max();
constexpr Value kMin = std::numeric_limits<Value>::min();

Value saturate(__int128 v) {
  if (v > kMax) return kMax;
  if (v < kMin) return kMin;
  return static_cast<Value>(v);
}

}  // namespace

Value applyBin(BinOp op, Value a, Value b, bool natural) {
  switch (op) {
    case BinOp::Add:
      return saturate(static_cast<__int128>(a) + b);
    case BinOp::Sub: {
      Value r = saturate(static_cast<__int128>(a) - b);
      return natural && r < 0 ? 0 : r;
    }
    case BinOp::Mul:
      return saturate(static_cast<__int128>(a) * b);
    case BinOp::Lt:
      return a < b ? 1 : 0;
    case BinOp::Eq:
      return a == b ? 1 : 0;
    case BinOp::Min:
      return std::min(a, b);
  }
  return 0;
}

Value applyUn(UnOp op, Value a) {
  switch (op) {
    case UnOp::Not:
      return a == 0 ? 1 : 0;
  }
  return 0;
}

}  // namespace gsos
