#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "optest/errors.hpp"

namespace optest {

// Finite outcome alphabet; symbols are indices 0..size-1.
class Alphabet {
 public:
  explicit Alphabet(int size) : size_(size) {
    if (size < 2) throw std::invalid_argument("alphabet size must be >= 2");
  }
  int size() const { return size_; }
  bool operator==(const Alphabet&) const = default;

 private:
  int size_;
};

// A finite outcome string. Length t identifies the cylinder of all infinite
// paths agreeing with it in the first t periods; length 0 is the whole space.
class History {
 public:
  History() = default;
  explicit History(std::vector<int> symbols) : symbols_(std::move(symbols)) {}

  // Parses a digit string like "0101"; symbols above 9 are not representable.
  static History parse(std::string_view digits) {
    std::vector<int> out;
    out.reserve(digits.size());
    for (char c : digits) {
      if (c < '0' || c > '9') throw std::invalid_argument(std::string("bad history digit: ") + c);
      out.push_back(c - '0');
    }
    return History(std::move(out));
  }

  std::size_t length() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  int operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<int>& symbols() const { return symbols_; }

  void push_back(int symbol) { symbols_.push_back(symbol); }
  void pop_back() { symbols_.pop_back(); }

  History extended(int symbol) const {
    History h(*this);
    h.push_back(symbol);
    return h;
  }

  History prefix(std::size_t t) const {
    if (t > symbols_.size()) throw std::invalid_argument("prefix longer than history");
    return History(std::vector<int>(symbols_.begin(), symbols_.begin() + t));
  }

  // True when *this is a (not necessarily proper) prefix of other.
  bool is_prefix_of(const History& other) const {
    if (length() > other.length()) return false;
    for (std::size_t i = 0; i < length(); ++i)
      if (symbols_[i] != other.symbols_[i]) return false;
    return true;
  }

  bool is_proper_prefix_of(const History& other) const {
    return length() < other.length() && is_prefix_of(other);
  }

  std::string str() const {
    std::string s;
    s.reserve(symbols_.size());
    for (int v : symbols_) {
      if (v >= 0 && v <= 9) {
        s.push_back(static_cast<char>('0' + v));
      } else {
        s += "(" + std::to_string(v) + ")";
      }
    }
    return s;
  }

  auto operator<=>(const History&) const = default;

  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

 private:
  std::vector<int> symbols_;
};

// Cap on exhaustive enumerations (histories per depth, live states per level).
inline constexpr std::int64_t kEnumerationLimit = std::int64_t(1) << 22;

inline void check_enumerable(int alphabet_size, int depth) {
  std::int64_t total = 1;
  for (int i = 0; i < depth; ++i) {
    total *= alphabet_size;
    if (total > kEnumerationLimit)
      throw EnumerationTooLarge("enumeration of " + std::to_string(alphabet_size) + "^" +
                                std::to_string(depth) + " histories exceeds the budget");
  }
}

// All depth-d histories in lexicographic order.
inline std::vector<History> all_histories(int alphabet_size, int depth) {
  check_enumerable(alphabet_size, depth);
  std::vector<History> out;
  std::int64_t total = 1;
  for (int i = 0; i < depth; ++i) total *= alphabet_size;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> current(depth, 0);
  for (std::int64_t n = 0; n < total; ++n) {
    out.emplace_back(current);
    for (int i = depth - 1; i >= 0; --i) {
      if (++current[i] < alphabet_size) break;
      current[i] = 0;
    }
  }
  return out;
}

// Eventually periodic infinite symbol sequence: a finite preamble followed by
// a repeating period. Dense among paths and finitely describable, so stopping
// times along it are computable at any depth.
class ReferencePath {
 public:
  ReferencePath(std::vector<int> preamble, std::vector<int> period)
      : preamble_(std::move(preamble)), period_(std::move(period)) {
    if (period_.empty()) throw std::invalid_argument("reference period must be nonempty");
  }

  // "01" -> 0101...; "110:01" -> 110 010101...
  static ReferencePath parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
      return ReferencePath({}, History::parse(text).symbols());
    return ReferencePath(History::parse(text.substr(0, colon)).symbols(),
                         History::parse(text.substr(colon + 1)).symbols());
  }

  int at(std::size_t t) const {
    if (t < preamble_.size()) return preamble_[t];
    return period_[(t - preamble_.size()) % period_.size()];
  }

  History prefix(std::size_t t) const {
    std::vector<int> out;
    out.reserve(t);
    for (std::size_t i = 0; i < t; ++i) out.push_back(at(i));
    return History(std::move(out));
  }

  int max_symbol() const {
    int m = 0;
    for (int v : preamble_) m = std::max(m, v);
    for (int v : period_) m = std::max(m, v);
    return m;
  }

  std::string str() const {
    std::string s = History(preamble_).str();
    if (!s.empty()) s += ":";
    return s + History(period_).str();
  }

  bool operator==(const ReferencePath&) const = default;

 private:
  std::vector<int> preamble_;
  std::vector<int> period_;
};

}  // namespace optest
