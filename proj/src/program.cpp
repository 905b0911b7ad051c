#include "fusec/program.hpp"

#include <algorithm>

namespace fusec {

namespace {
const Decl* find_kind(const std::vector<Decl>& decls, std::string_view name, std::size_t limit, DeclKind kind) {
  std::size_t end = std::min(limit, decls.size());
  for (std::size_t i = end; i-- > 0;)
    if (decls[i].kind == kind && decls[i].name == name) return &decls[i];
  return nullptr;
}
}  // namespace

const Decl* Program::find_term(std::string_view name, std::size_t limit) const {
  return find_kind(decls, name, limit, DeclKind::Term);
}

const Decl* Program::find_functor(std::string_view name, std::size_t limit) const {
  return find_kind(decls, name, limit, DeclKind::Functor);
}

const Decl* Program::find_alias(std::string_view name, std::size_t limit) const {
  return find_kind(decls, name, limit, DeclKind::Alias);
}

std::size_t Program::index_of(std::string_view name) const {
  for (std::size_t i = decls.size(); i-- > 0;)
    if (decls[i].kind == DeclKind::Term && decls[i].name == name) return i;
  return npos;
}

std::vector<std::string> Program::term_names() const {
  std::vector<std::string> names;
  for (const auto& d : decls)
    if (d.kind == DeclKind::Term) names.push_back(d.name);
  return names;
}

}  // namespace fusec
