// Copyright 2026 The twostage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "twostage/rational.hpp"

#include <cctype>
#include <stdexcept>
#include <utility>

namespace twostage {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class ten_to(unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, e);
  return out;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw std::invalid_argument("malformed number: \"" + std::string(text) + "\"");
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) bad_number(text);
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string_view int_part = s;
  std::string_view frac_part;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) bad_number(text);
  if (!int_part.empty() && !all_digits(int_part)) bad_number(text);
  if (!frac_part.empty() && !all_digits(frac_part)) bad_number(text);

  std::string digits(int_part);
  digits += frac_part;
  mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
  exponent -= static_cast<long>(frac_part.size());
  mpq_class value(mantissa);
  if (exponent > 0) {
    value *= mpq_class(ten_to(static_cast<unsigned long>(exponent)));
  } else if (exponent < 0) {
    value /= mpq_class(ten_to(static_cast<unsigned long>(-exponent)));
  }
  value.canonicalize();
  if (negative) value = -value;
  return Rational(std::move(value));
}

}  // namespace

Rational::Rational(long num, long den) : value_(num, den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  value_.canonicalize();
}

Rational::Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);

  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  bool negative = false;
  if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
    negative = num.front() == '-';
    num.remove_prefix(1);
  }
  if (!all_digits(num) || !all_digits(den)) bad_number(text);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
  mpq_class value{mpz_class(std::string(num), 10), d};
  value.canonicalize();
  if (negative) value = -value;
  return Rational(std::move(value));
}

Rational Rational::power(long base, unsigned long exponent) {
  mpz_class b(base);
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), exponent);
  return Rational(mpq_class(out));
}

std::string Rational::str() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(int significant_digits) const {
  mpf_class f(value_, 512);
  mp_exp_t exp = 0;
  std::string digits = f.get_str(exp, 10, static_cast<size_t>(significant_digits));
  if (digits.empty() || digits == "0") return "0";
  std::string sign;
  if (digits.front() == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  // digits represents 0.d1d2... * 10^exp
  std::string out;
  if (exp <= 0) {
    if (exp < -6) {
      out = digits.substr(0, 1);
      if (digits.size() > 1) out += "." + digits.substr(1);
      return sign + out + "e" + std::to_string(exp - 1);
    }
    out = "0." + std::string(static_cast<size_t>(-exp), '0') + digits;
  } else if (static_cast<size_t>(exp) >= digits.size()) {
    if (exp > 21) {
      out = digits.substr(0, 1);
      if (digits.size() > 1) out += "." + digits.substr(1);
      return sign + out + "e+" + std::to_string(exp - 1);
    }
    out = digits + std::string(static_cast<size_t>(exp) - digits.size(), '0');
  } else {
    out = digits.substr(0, static_cast<size_t>(exp)) + "." +
          digits.substr(static_cast<size_t>(exp));
  }
  return sign + out;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace twostage
