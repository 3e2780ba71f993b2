#include "anon/rational.hpp"

#include <cctype>

namespace anon {

namespace {

BigInt parse_integer(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw std::invalid_argument("bad number: " + text);
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw std::invalid_argument("bad number: " + text);
    }
  }
  return BigInt(text);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (frac_len == 0) throw std::invalid_argument("bad decimal: " + text);
    BigInt num = parse_integer(digits);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(num, den);
  }
  return Rational(parse_integer(text));
}

std::string format_rational(const Rational& value) {
  std::string num = numerator(value).str();
  if (denominator(value) == 1) return num;
  return num + "/" + denominator(value).str();
}

}  // namespace anon
