#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace ouhjb::csv {

/// Round-trippable, locale-independent rendering ("%.17g").
std::string format(double value);

/// Minimal comma-separated row writer; values are never quoted, so callers
/// must not pass fields containing commas.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  Writer& field(std::string_view text);
  Writer& field(double value);
  Writer& field(long long value);
  Writer& field(int value) { return field(static_cast<long long>(value)); }
  void end_row();

  void header(std::initializer_list<std::string_view> names);

 private:
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace ouhjb::csv
