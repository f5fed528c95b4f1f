#include "ibg/ltlf.hpp"

#include <cctype>
#include <map>
#include <set>

namespace ibg::ltlf {

namespace {

Formula make(Op op, Formula lhs = nullptr, Formula rhs = nullptr, std::uint32_t channel = 0,
             std::uint32_t symbol = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->channel = channel;
  n->symbol = symbol;
  return n;
}

}  // namespace

Formula make_true() { return make(Op::True); }
Formula make_false() { return make(Op::False); }
Formula atom(std::uint32_t channel, std::uint32_t symbol) { return make(Op::Atom, nullptr, nullptr, channel, symbol); }
Formula neg_atom(std::uint32_t channel, std::uint32_t symbol) {
  return make(Op::NegAtom, nullptr, nullptr, channel, symbol);
}
Formula unary(Op op, Formula arg) { return make(op, std::move(arg)); }
Formula binary(Op op, Formula lhs, Formula rhs) { return make(op, std::move(lhs), std::move(rhs)); }

bool equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op) return false;
  if (a->op == Op::Atom || a->op == Op::NegAtom) return a->channel == b->channel && a->symbol == b->symbol;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

std::size_t depth(const Formula& f) {
  if (!f) return 0;
  return 1 + std::max(depth(f->lhs), depth(f->rhs));
}

std::string to_string(const Formula& f, const ProductAlphabet& alphabet) {
  switch (f->op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return "p" + std::to_string(f->channel) + "=" + alphabet.symbol(f->channel, f->symbol);
    case Op::NegAtom: return "!p" + std::to_string(f->channel) + "=" + alphabet.symbol(f->channel, f->symbol);
    case Op::Not: return "!(" + to_string(f->lhs, alphabet) + ")";
    case Op::Next: return "X(" + to_string(f->lhs, alphabet) + ")";
    case Op::WeakNext: return "N(" + to_string(f->lhs, alphabet) + ")";
    case Op::Eventually: return "F(" + to_string(f->lhs, alphabet) + ")";
    case Op::Always: return "G(" + to_string(f->lhs, alphabet) + ")";
    case Op::And: return "(" + to_string(f->lhs, alphabet) + " & " + to_string(f->rhs, alphabet) + ")";
    case Op::Or: return "(" + to_string(f->lhs, alphabet) + " | " + to_string(f->rhs, alphabet) + ")";
    case Op::Until: return "(" + to_string(f->lhs, alphabet) + " U " + to_string(f->rhs, alphabet) + ")";
    case Op::Release: return "(" + to_string(f->lhs, alphabet) + " R " + to_string(f->rhs, alphabet) + ")";
  }
  return {};
}

SyntaxError::SyntaxError(const std::string& message, std::size_t offset)
    : InputError("ltlf: " + message + " at offset " + std::to_string(offset)), offset_(offset) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ProductAlphabet& alphabet) : text_(text), alphabet_(alphabet) {}

  Formula run() {
    auto f = parse_or();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_word(std::string_view word) const {
    if (text_.substr(pos_, word.size()) != word) return false;
    const auto end = pos_ + word.size();
    return end == text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_');
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Formula parse_or() {
    auto lhs = parse_and();
    while (accept('|')) lhs = binary(Op::Or, lhs, parse_and());
    return lhs;
  }

  Formula parse_and() {
    auto lhs = parse_temporal();
    while (accept('&')) lhs = binary(Op::And, lhs, parse_temporal());
    return lhs;
  }

  Formula parse_temporal() {
    auto lhs = parse_unary();
    skip_space();
    if (pos_ < text_.size() && (text_[pos_] == 'U' || text_[pos_] == 'R')) {
      const Op op = text_[pos_] == 'U' ? Op::Until : Op::Release;
      ++pos_;
      return binary(op, lhs, parse_temporal());
    }
    return lhs;
  }

  Formula parse_unary() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    switch (text_[pos_]) {
      case '!': ++pos_; return unary(Op::Not, parse_unary());
      case 'X': ++pos_; return unary(Op::Next, parse_unary());
      case 'N': ++pos_; return unary(Op::WeakNext, parse_unary());
      case 'F': ++pos_; return unary(Op::Eventually, parse_unary());
      case 'G': ++pos_; return unary(Op::Always, parse_unary());
      default: return parse_primary();
    }
  }

  Formula parse_primary() {
    skip_space();
    const auto start = pos_;
    if (accept('(')) {
      auto inner = parse_or();
      if (!accept(')')) {
        skip_space();
        throw SyntaxError(pos_ >= text_.size() ? "unexpected end of input" : "expected ')'", pos_);
      }
      return inner;
    }
    if (at_word("true")) {
      pos_ += 4;
      return make_true();
    }
    if (at_word("false")) {
      pos_ += 5;
      return make_false();
    }
    if (pos_ + 1 < text_.size() && text_[pos_] == 'p' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      std::size_t channel = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        channel = channel * 10 + static_cast<std::size_t>(text_[pos_] - '0');
        if (channel > 1'000'000) throw SyntaxError("channel index too large", start);
        ++pos_;
      }
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '=') throw SyntaxError("expected '='", pos_);
      ++pos_;
      skip_space();
      const auto sym_start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      if (pos_ == sym_start) throw SyntaxError("expected symbol", pos_);
      const auto name = text_.substr(sym_start, pos_ - sym_start);
      if (channel >= alphabet_.num_channels())
        throw SyntaxError("unknown channel p" + std::to_string(channel), start);
      auto symbol = alphabet_.find(channel, name);
      if (!symbol)
        throw SyntaxError("unknown symbol '" + std::string(name) + "' for channel p" + std::to_string(channel),
                          sym_start);
      return atom(static_cast<std::uint32_t>(channel), *symbol);
    }
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    throw SyntaxError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
  }

  std::string_view text_;
  const ProductAlphabet& alphabet_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text, const ProductAlphabet& alphabet) { return Parser(text, alphabet).run(); }

// ---------------------------------------------------------------------------
// Normal form

namespace {

Formula nnf(const Formula& f, bool negated) {
  switch (f->op) {
    case Op::True: return negated ? make_false() : make_true();
    case Op::False: return negated ? make_true() : make_false();
    case Op::Atom: return negated ? neg_atom(f->channel, f->symbol) : f;
    case Op::NegAtom: return negated ? atom(f->channel, f->symbol) : f;
    case Op::Not: return nnf(f->lhs, !negated);
    case Op::And: return binary(negated ? Op::Or : Op::And, nnf(f->lhs, negated), nnf(f->rhs, negated));
    case Op::Or: return binary(negated ? Op::And : Op::Or, nnf(f->lhs, negated), nnf(f->rhs, negated));
    case Op::Next: return unary(negated ? Op::WeakNext : Op::Next, nnf(f->lhs, negated));
    case Op::WeakNext: return unary(negated ? Op::Next : Op::WeakNext, nnf(f->lhs, negated));
    case Op::Until: return binary(negated ? Op::Release : Op::Until, nnf(f->lhs, negated), nnf(f->rhs, negated));
    case Op::Release:
      return binary(negated ? Op::Until : Op::Release, nnf(f->lhs, negated), nnf(f->rhs, negated));
    case Op::Eventually:
      return negated ? binary(Op::Release, make_false(), nnf(f->lhs, true))
                     : binary(Op::Until, make_true(), nnf(f->lhs, false));
    case Op::Always:
      return negated ? binary(Op::Until, make_true(), nnf(f->lhs, true))
                     : binary(Op::Release, make_false(), nnf(f->lhs, false));
  }
  return f;
}

}  // namespace

Formula normalize(const Formula& f) { return nnf(f, false); }

bool holds_on_empty(const Formula& f) {
  switch (f->op) {
    case Op::True:
    case Op::WeakNext:
    case Op::Release:
    case Op::Always: return true;
    case Op::And: return holds_on_empty(f->lhs) && holds_on_empty(f->rhs);
    case Op::Or: return holds_on_empty(f->lhs) || holds_on_empty(f->rhs);
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

std::string key(const Formula& f) {
  switch (f->op) {
    case Op::Atom: return "@" + std::to_string(f->channel) + "=" + std::to_string(f->symbol);
    case Op::NegAtom: return "~" + std::to_string(f->channel) + "=" + std::to_string(f->symbol);
    case Op::True: return "T";
    case Op::False: return "F";
    default: {
      std::string out = std::to_string(static_cast<int>(f->op)) + "(" + key(f->lhs);
      if (f->rhs) out += "," + key(f->rhs);
      return out + ")";
    }
  }
}

void collect_channels(const Formula& f, std::set<std::uint32_t>& out) {
  if (!f) return;
  if (f->op == Op::Atom || f->op == Op::NegAtom) out.insert(f->channel);
  collect_channels(f->lhs, out);
  collect_channels(f->rhs, out);
}

void check_atoms(const Formula& f, const ProductAlphabet& alphabet) {
  if (!f) return;
  if (f->op == Op::Atom || f->op == Op::NegAtom) {
    if (f->channel >= alphabet.num_channels() || f->symbol >= alphabet.channel_size(f->channel))
      throw InputError("ltlf: atom does not match the alphabet");
  }
  check_atoms(f->lhs, alphabet);
  check_atoms(f->rhs, alphabet);
}

class Compiler {
 public:
  Compiler(const Formula& nnf, const AlphabetPtr& alphabet) : alphabet_(alphabet) {
    std::set<std::uint32_t> channels;
    collect_channels(nnf, channels);
    mask_ = ChannelMask(std::vector<std::uint32_t>(channels.begin(), channels.end()));
    slots_.assign(alphabet->num_channels(), kNone);
    for (std::size_t i = 0; i < mask_.agents().size(); ++i) slots_[mask_.agents()[i]] = static_cast<std::uint32_t>(i);
    states_.push_back({nnf, holds_on_empty(nnf)});
    names_.push_back("init:" + to_string(nnf, *alphabet));
  }

  Afa run() {
    RestrictedAlphabet restricted(*alphabet_, mask_);
    std::vector<std::vector<PositiveFormula>> rows;
    for (std::size_t q = 0; q < states_.size(); ++q) {
      std::vector<PositiveFormula> row;
      const Formula target = states_[q].target;
      for (LetterIndex r = 0; r < restricted.size(); ++r) {
        picks_ = restricted.picks(r);
        row.push_back(expand(target));
      }
      rows.push_back(std::move(row));
    }
    std::vector<PositiveFormula> table;
    std::vector<bool> accepting;
    for (std::size_t q = 0; q < states_.size(); ++q) {
      table.insert(table.end(), rows[q].begin(), rows[q].end());
      accepting.push_back(states_[q].accepting);
    }
    return Afa(alphabet_, mask_, 0, std::move(table), std::move(accepting), std::move(names_));
  }

 private:
  struct State {
    Formula target;
    bool accepting;
  };

  StateId obligation(const Formula& target, bool weak) {
    const auto k = std::string(weak ? "W" : "S") + key(target);
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<StateId>(states_.size());
    ids_.emplace(k, id);
    states_.push_back({target, weak});
    names_.push_back(std::string(weak ? "weak:" : "strong:") + to_string(target, *alphabet_));
    return id;
  }

  bool letter_has(const Formula& f) const { return picks_[slots_[f->channel]] == f->symbol; }

  PositiveFormula expand(const Formula& f) {
    using PF = PositiveFormula;
    switch (f->op) {
      case Op::True: return PF::top();
      case Op::False: return PF::bottom();
      case Op::Atom: return letter_has(f) ? PF::top() : PF::bottom();
      case Op::NegAtom: return letter_has(f) ? PF::bottom() : PF::top();
      case Op::And: return PF::conj({expand(f->lhs), expand(f->rhs)});
      case Op::Or: return PF::disj({expand(f->lhs), expand(f->rhs)});
      case Op::Next: return PF::atom(obligation(f->lhs, false));
      case Op::WeakNext: return PF::atom(obligation(f->lhs, true));
      case Op::Until:
        return PF::disj({expand(f->rhs), PF::conj({expand(f->lhs), PF::atom(obligation(f, false))})});
      case Op::Release:
        return PF::conj({expand(f->rhs), PF::disj({expand(f->lhs), PF::atom(obligation(f, true))})});
      default: throw std::logic_error("ltlf: formula is not in negation normal form");
    }
  }

  AlphabetPtr alphabet_;
  ChannelMask mask_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint32_t> picks_;
  std::vector<State> states_;
  std::vector<std::string> names_;
  std::map<std::string, StateId> ids_;
};

}  // namespace

Afa compile_to_afa(const Formula& formula, const AlphabetPtr& alphabet) {
  if (!alphabet) throw InputError("ltlf: missing alphabet");
  check_atoms(formula, *alphabet);
  return Compiler(normalize(formula), alphabet).run();
}

}  // namespace ibg::ltlf
