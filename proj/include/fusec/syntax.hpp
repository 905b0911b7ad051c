#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fusec/program.hpp"
#include "fusec/value.hpp"

namespace fusec {

class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& message);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

// Declarations are checked for name resolution only; typing is separate.
// Term bodies come back alpha-normalized against the global names.
Program parse_program(std::string_view source);

// Standalone type or term in the scope of decls[0, visible).
TypeExpr parse_type(std::string_view source, const Program& program, std::size_t visible = Program::npos);
Term parse_term(std::string_view source, const Program& program, std::size_t visible = Program::npos);

// Printers abbreviate with functor and alias names from decls[0, visible)
// so that parsing the output in the same scope gives back the same tree.
std::string print_type(const TypeExpr& t, const Program& program, std::size_t visible = Program::npos);
std::string print_term(const Term& t, const Program& program, std::size_t visible = Program::npos);
std::string print_program(const Program& program);

// Untyped shape of an input literal: 3, (), (a, b), [a, b], inl v, inr v,
// in v, and {e0; e1} for nests.
struct ValueSyntax {
  enum class Kind { Nat, Unit, Tuple, List, Inl, Inr, In, Nest };
  Kind kind = Kind::Unit;
  std::uint64_t nat = 0;
  std::vector<ValueSyntax> items;
  SourcePos pos;
};

ValueSyntax parse_value_syntax(std::string_view source);
// Reads a literal at a first-order type. Tuples flatten to the right, and
// lists are accepted at list-shaped inductive types.
Value value_from_syntax(const ValueSyntax& s, const TypeExpr& type);
Value parse_value(std::string_view source, const TypeExpr& type);

}  // namespace fusec
