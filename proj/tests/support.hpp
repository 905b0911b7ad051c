#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fusec/program.hpp"
#include "fusec/syntax.hpp"
#include "fusec/value.hpp"

namespace fusec::testing {

inline std::string corpus_path(const std::string& name) { return std::string(FUSEC_CORPUS_DIR) + "/" + name; }
inline std::string data_path(const std::string& name) { return std::string(FUSEC_TEST_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program load(const std::string& path) { return parse_program(slurp(path)); }
inline Program corpus(const std::string& name) { return load(corpus_path(name)); }

inline std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(FUSEC_CORPUS_DIR))
    if (e.path().extension() == ".fuse") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline Value nat_list(const FunctorExpr& nl, const std::vector<std::uint64_t>& xs) {
  Value cur = val::mu(nl, val::inl(val::unit()));
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) cur = val::mu(nl, val::inr(val::pair(val::nat(*it), cur)));
  return cur;
}

inline std::vector<std::uint64_t> list_of(std::size_t len, std::uint64_t seed) {
  std::vector<std::uint64_t> xs(len);
  for (std::size_t i = 0; i < len; ++i) xs[i] = (seed * 31 + i * 7) % 10;
  return xs;
}

// Pairs of lists with lengths covering 0..max_len on both sides.
inline std::vector<Value> list_pairs(const FunctorExpr& nl, std::size_t count, std::size_t max_len) {
  std::vector<Value> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t m = i % (max_len + 1);
    std::size_t n = (i * 17 + i / (max_len + 1)) % (max_len + 1);
    out.push_back(val::pair(nat_list(nl, list_of(m, i)), nat_list(nl, list_of(n, i + 1))));
  }
  return out;
}

}  // namespace fusec::testing
