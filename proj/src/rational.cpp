#include "ccgeo/rational.hpp"

namespace ccgeo {

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty length");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rat(num, den);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string head = text.substr(0, dot);
    std::string tail = text.substr(dot + 1);
    for (char c : tail)
      if (c < '0' || c > '9') throw std::invalid_argument("bad decimal '" + text + "'");
    bool neg = !head.empty() && head[0] == '-';
    BigInt ipart = head.empty() || head == "-" ? BigInt(0) : BigInt(head);
    BigInt den = 1;
    for (size_t i = 0; i < tail.size(); ++i) den *= 10;
    BigInt num = tail.empty() ? BigInt(0) : BigInt(tail);
    Rat frac(num, den);
    Rat whole(ipart);
    return neg ? Rat(whole - frac) : Rat(whole + frac);
  }
  return Rat(BigInt(text));
}

std::string format_rat(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

BigInt rat_floor(const Rat& r) {
  BigInt q = numerator(r) / denominator(r);
  if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

BigInt rat_ceil(const Rat& r) { return -rat_floor(-r); }

}  // namespace ccgeo
