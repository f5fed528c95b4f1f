#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "ibg/alphabet.hpp"
#include "ibg/automata.hpp"

namespace ibg::ltlf {

enum class Op : std::uint8_t {
  True,
  False,
  Atom,     // channel plays symbol
  NegAtom,  // channel plays anything else; only produced by normalize()
  Not,
  And,
  Or,
  Next,      // X, strong
  WeakNext,  // N
  Until,
  Release,
  Eventually,
  Always,
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::True;
  std::uint32_t channel = 0;
  std::uint32_t symbol = 0;
  Formula lhs;
  Formula rhs;
};

Formula make_true();
Formula make_false();
Formula atom(std::uint32_t channel, std::uint32_t symbol);
Formula neg_atom(std::uint32_t channel, std::uint32_t symbol);
Formula unary(Op op, Formula arg);
Formula binary(Op op, Formula lhs, Formula rhs);

bool equal(const Formula& a, const Formula& b);
std::size_t depth(const Formula& f);
std::string to_string(const Formula& f, const ProductAlphabet& alphabet);

class SyntaxError : public InputError {
 public:
  SyntaxError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Grammar: atom `pN=SYM`, unary `! X N F G`, binary `U R & |`, parentheses,
/// `true`, `false`. Precedence unary > U,R (right-assoc) > & > |.
Formula parse(std::string_view text, const ProductAlphabet& alphabet);

/// Negation normal form with F φ = true U φ and G φ = false R φ.
Formula normalize(const Formula& f);

/// Whether the formula holds on the empty word.
bool holds_on_empty(const Formula& normalized);

/// Formula-as-state AFA. States are the initial formula plus one state per
/// temporal obligation (strong for X and U, weak for N and R); weak states and
/// the initial state when the formula holds on ε are accepting. The mask is
/// the set of channels mentioned by atoms.
Afa compile_to_afa(const Formula& formula, const AlphabetPtr& alphabet);

}  // namespace ibg::ltlf
