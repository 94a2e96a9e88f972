#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string_view>

namespace gsos {

using Value = std::int64_t;
using Cell = std::uint64_t;

enum class BinOp : std::uint8_t { Add, Sub, Mul, Lt, Eq, Min };
enum class UnOp : std::uint8_t { Not };

std::string_view binOpName(BinOp op);
std::string_view unOpName(UnOp op);

// Arithmetic expressions shared by every language. Literals are signed so the
// integer-valued language can reuse the type; natural-valued languages reject
// negative literals in their well-formedness check.
class Expr {
 public:
  enum class Kind : std::uint8_t { Lit, Var, Bin, Un };

  Expr();  // lit 0

  static Expr lit(Value n);
  static Expr var(Cell l);
  static Expr bin(BinOp op, Expr lhs, Expr rhs);
  static Expr un(UnOp op, Expr operand);

  Kind kind() const;
  Value literal() const;
  Cell cell() const;
  BinOp binOp() const;
  UnOp unOp() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  const Expr& operand() const { return lhs(); }

  // Atoms have depth 1.
  std::size_t depth() const;
  // Largest var index referenced, or -1 when the expression reads no cell.
  std::int64_t maxCell() const;
  Value minLiteral() const;
  std::uint64_t hash() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Saturating arithmetic; `natural` truncates subtraction at zero.
Value applyBin(BinOp op, Value a, Value b, bool natural);
Value applyUn(UnOp op, Value a);

template <class Lookup>
Value evaluate(const Expr& e, Lookup&& lookup, bool natural) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return e.literal();
    case Expr::Kind::Var:
      return lookup(e.cell());
    case Expr::Kind::Bin:
      return applyBin(e.binOp(), evaluate(e.lhs(), lookup, natural),
                      evaluate(e.rhs(), lookup, natural), natural);
    case Expr::Kind::Un:
      return applyUn(e.unOp(), evaluate(e.operand(), lookup, natural));
  }
  return 0;
}

}  // namespace gsos
