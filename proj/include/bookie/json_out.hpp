#pragma once

// Minimal JSON emitter with a fixed field order and 17-significant-digit
// numbers, so identical inputs give byte-identical output.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bookie {

/// Locale-independent decimal with 17 significant digits.
/// Non-finite values become "null" (JSON has no infinities).
std::string format_real(double x);

std::string json_escape(std::string_view s);

class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(double x);
  JsonWriter& value(int x);
  JsonWriter& value(long long x);
  JsonWriter& value(std::uint64_t x);
  JsonWriter& value(bool x);
  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(std::span<const double> xs);
  JsonWriter& value(const std::vector<double>& xs) { return value(std::span<const double>(xs)); }
  JsonWriter& null();
  /// Splices pre-rendered JSON as one value.
  JsonWriter& raw(std::string_view json);

  template <class T>
  JsonWriter& field(std::string_view k, const T& v) {
    key(k);
    return value(v);
  }

  const std::string& str() const { return out_; }

 private:
  void before_value();

  std::string out_;
  std::vector<bool> first_;  // per open container: no element written yet
  bool after_key_ = false;
};

}  // namespace bookie
