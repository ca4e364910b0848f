#include "ouhjb/csv.hpp"

#include <cstdio>

namespace ouhjb::csv {

std::string format(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Writer& Writer::field(std::string_view text) {
  if (!first_) out_ << ',';
  out_ << text;
  first_ = false;
  return *this;
}

Writer& Writer::field(double value) { return field(std::string_view(format(value))); }

Writer& Writer::field(long long value) { return field(std::string_view(std::to_string(value))); }

void Writer::end_row() {
  out_ << '\n';
  first_ = true;
}

void Writer::header(std::initializer_list<std::string_view> names) {
  for (auto name : names) field(name);
  end_row();
}

}  // namespace ouhjb::csv
