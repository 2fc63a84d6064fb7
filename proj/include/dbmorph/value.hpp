#pragma once

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace dbmorph {

struct Null {
  friend constexpr auto operator<=>(Null, Null) = default;
};

/// A domain constant: an integer, a string, or the NULL marker.
///
/// Equality is syntactic: Value(132) and Value("132") are different values
/// even though they render identically.
class Value {
 public:
  Value() = default;
  template <std::integral I>
  Value(I i) : data_(static_cast<std::int64_t>(i)) {}  // NOLINT(google-explicit-constructor)
  Value(std::string s) : data_(std::move(s)) {}        // NOLINT(google-explicit-constructor)
  Value(const char* s) : data_(std::string(s)) {}      // NOLINT(google-explicit-constructor)

  static Value null() { return Value(); }

  bool is_null() const noexcept { return std::holds_alternative<Null>(data_); }
  bool is_int() const noexcept { return std::holds_alternative<std::int64_t>(data_); }
  bool is_string() const noexcept { return std::holds_alternative<std::string>(data_); }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }

  /// Plain text rendering: integers in decimal, strings verbatim, NULL as "null".
  std::string render() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  std::variant<Null, std::int64_t, std::string> data_;
};

/// An ordered sequence of values. The empty tuple <> doubles as the
/// "no output" result of component functions.
using Tuple = std::vector<Value>;

std::string render(const Tuple& t);

std::size_t hash_value(const Value& v) noexcept;

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept { return hash_value(v); }
};

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept;
};

}  // namespace dbmorph
