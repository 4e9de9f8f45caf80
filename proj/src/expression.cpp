#include "gvf/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "gvf/types.hpp"

namespace gvf {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  double parse() {
    const double v = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  double sum() {
    double v = product();
    for (;;) {
      skip_space();
      if (accept('+')) v += product();
      else if (accept('-')) v -= product();
      else return v;
    }
  }

  double product() {
    double v = unary();
    for (;;) {
      skip_space();
      if (accept('*')) v *= unary();
      else if (accept('/')) v /= unary();
      else return v;
    }
  }

  double unary() {
    skip_space();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  double primary() {
    skip_space();
    if (accept('(')) {
      const double v = sum();
      skip_space();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      const auto start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const auto name = text_.substr(start, pos_ - start);
      if (name == "pi") return std::numbers::pi;
      if (name == "e") return std::numbers::e;
      fail("unknown name '" + std::string(name) + "'");
    }
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("expression \"" + std::string(text_) + "\": " + what + " at offset " +
                          std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

double evaluate_expression(std::string_view text) {
  const double v = Parser(text).parse();
  if (!std::isfinite(v)) throw InvalidArgument("expression \"" + std::string(text) + "\" is not finite");
  return v;
}

}  // namespace gvf
