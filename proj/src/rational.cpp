#include "spsched/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace spsched {

Rat::Rat(long long n) {
  mpz_class z;
  if (n >= 0) {
    z = mpz_class(static_cast<unsigned long>(n));
  } else {
    // avoid overflow on LLONG_MIN
    z = mpz_class(static_cast<unsigned long>(-(n + 1)));
    z += 1;
    z = -z;
  }
  v_ = mpq_class(z);
}

Rat::Rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.v_ == 0) throw std::invalid_argument("rational division by zero");
  v_ /= o.v_;
  return *this;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// "intpart", "intpart.fracpart", optional exponent; no sign.
mpq_class parse_decimal(const std::string& s) {
  std::string mantissa = s;
  long exponent = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    mantissa = s.substr(0, epos);
    std::string exp = s.substr(epos + 1);
    if (exp.empty()) throw std::invalid_argument("bad exponent in number: " + s);
    std::size_t pos = 0;
    exponent = std::stol(exp, &pos);
    if (pos != exp.size()) throw std::invalid_argument("bad exponent in number: " + s);
  }
  std::string digits = mantissa;
  auto dot = mantissa.find('.');
  if (dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
  }
  if (!all_digits(digits)) throw std::invalid_argument("bad number: " + s);
  mpq_class value(mpz_class(digits, 10));
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0)
    value *= pow10;
  else
    value /= pow10;
  value.canonicalize();
  return value;
}

}  // namespace

Rat Rat::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty number");

  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    s.erase(s.begin());
  }
  if (s.empty()) throw std::invalid_argument("bad number: " + text);

  mpq_class value;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("bad rational: " + text);
    mpz_class d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    value = mpq_class(mpz_class(num, 10)) / mpq_class(d);
    value.canonicalize();
  } else {
    value = parse_decimal(s);
  }
  if (negative) value = -value;
  Rat r;
  r.v_ = value;
  return r;
}

std::string Rat::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace spsched
