#pragma once

#include <cctype>
#include <string>

#include "forge/error.hpp"

namespace forge {

// Ordered set of recognizable symbols plus the case-folding policy used for
// answer comparison. The default 36-class set folds case: labels may render
// as lowercase glyphs but compare as their uppercase class.
struct Charset {
  std::string symbols;
  bool fold_case = true;

  char fold(char c) const {
    return fold_case ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
  }

  int index_of(char c) const {
    char f = fold(c);
    for (size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i] == f) return static_cast<int>(i);
    return -1;
  }

  bool contains(char c) const { return index_of(c) >= 0; }

  std::string fold_label(const std::string& s) const {
    std::string out = s;
    for (char& c : out) c = fold(c);
    return out;
  }

  void require_label(const std::string& label) const {
    for (char c : label)
      if (!contains(c))
        throw DataError(std::string("character '") + c + "' not in charset");
  }

  int size() const { return static_cast<int>(symbols.size()); }

  static Charset digits() { return {"0123456789", false}; }
  static Charset alnum36() { return {"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ", true}; }
  static Charset alnum62() {
    return {"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz", false};
  }
};

inline bool operator==(const Charset& a, const Charset& b) {
  return a.symbols == b.symbols && a.fold_case == b.fold_case;
}

}  // namespace forge
