#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fusec/program.hpp"
#include "fusec/term.hpp"
#include "fusec/type.hpp"

namespace fusec {

struct TypingContext {
  std::vector<std::pair<std::string, TypeExpr>> vars;  // innermost last
  std::vector<std::string> tyvars;

  TypingContext with_var(const std::string& name, TypeExpr type) const;
  TypingContext with_tyvar(const std::string& name) const;
  const TypeExpr* lookup(const std::string& name) const;
  bool has_tyvar(const std::string& name) const;
};

class TypeError : public Error {
 public:
  enum class Kind {
    TypeMismatch,
    EscapedTypeVariable,
    UnboundVariable,
    UnboundTypeVariable,
    NotAFunction,
    NotPolymorphic,
    ImpredicativeAnnotation,
  };

  TypeError(Kind kind, std::string detail, TermPath path, SourcePos pos, std::string decl = {});

  Kind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }
  const TermPath& path() const { return path_; }
  SourcePos pos() const { return pos_; }
  const std::string& decl() const { return decl_; }

 private:
  Kind kind_;
  std::string detail_;
  TermPath path_;
  SourcePos pos_;
  std::string decl_;
};

const char* to_string(TypeError::Kind kind);

// Checks terms against the declarations of `program` that are visible:
// decls[0, visible). Declarations are looked up by name; a term declaration
// sees itself when `visible` includes it.
class TypeChecker {
 public:
  explicit TypeChecker(const Program& program, std::size_t visible = Program::npos);

  TypeExpr check(const TypingContext& ctx, const Term& t, TermPath path = {}) const;
  // Context seen by child `kid` of `node` when `node` is checked in `ctx`.
  TypingContext child_context(const TypingContext& ctx, const Term& node, std::size_t kid) const;
  // Context at `path` below `root`.
  TypingContext context_at(const TypingContext& ctx, const Term& root, const TermPath& path) const;
  // Type variables must be in scope; annotations must be quantifier-free.
  void check_type_wf(const TypingContext& ctx, const TypeExpr& t, bool allow_forall, const TermPath& path,
                     SourcePos pos) const;

 private:
  const Program& program_;
  std::size_t visible_;
};

TypeExpr typecheck_term(const Program& program, const TypingContext& ctx, const Term& t);

struct DeclType {
  std::string name;
  TypeExpr type;
};

// Checks every term declaration in order and returns the declared types.
// The first failure is rethrown with the declaration name attached.
std::vector<DeclType> typecheck_program(const Program& program);

}  // namespace fusec
