#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "fusec/term.hpp"
#include "fusec/type.hpp"

namespace fusec {

enum class DeclKind { Functor, Alias, Term };

struct Decl {
  DeclKind kind = DeclKind::Term;
  std::string name;
  FunctorExpr functor;  // Functor
  TypeExpr type;        // Alias body, or declared type of a Term
  Term body;            // Term
  SourcePos pos;
};

// An ordered source file. Term declarations may refer to themselves and to
// anything declared before them.
struct Program {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::vector<Decl> decls;

  // Searches decls[0, limit) from the back.
  const Decl* find_term(std::string_view name, std::size_t limit = npos) const;
  const Decl* find_functor(std::string_view name, std::size_t limit = npos) const;
  const Decl* find_alias(std::string_view name, std::size_t limit = npos) const;
  std::size_t index_of(std::string_view name) const;

  std::vector<std::string> term_names() const;
};

}  // namespace fusec
