#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fockbell/fock_core.hpp"

namespace fockbell {

// Ordered JSON builder. Keys keep insertion order and floats are printed with
// 17 significant digits, so documents are byte-stable across runs and doubles
// round-trip exactly.
class Json {
 public:
  Json() : kind_(Kind::Null) {}

  static Json object();
  static Json array();
  static Json number(double value);
  static Json integer(long long value);
  static Json boolean(bool value);
  static Json string(std::string value);

  Json& set(const std::string& key, Json value);  // object member
  Json& push(Json value);                         // array element

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };

  void write(std::string& out, int indent, int depth) const;

  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<Json> items_;
  std::vector<std::pair<std::string, Json>> members_;
};

std::string format_double(double value);  // %.17g

// State file format: header (statistics, truncation, partition) followed by
// sparse amplitude records; occupation entries are [position-in-mode-list,
// count] pairs against the partition's sorted mode lists.
std::string state_to_json(const FieldState& s);
FieldState state_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace fockbell
