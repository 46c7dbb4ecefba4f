#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace orbitscope {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Complex = std::complex<double>;

enum class Field { real, complex, rational };

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr Field field = Field::real;
  static constexpr bool exact = false;
  static constexpr bool is_complex = false;
};

template <>
struct ScalarTraits<Complex> {
  static constexpr Field field = Field::complex;
  static constexpr bool exact = false;
  static constexpr bool is_complex = true;
};

template <>
struct ScalarTraits<Rational> {
  static constexpr Field field = Field::rational;
  static constexpr bool exact = true;
  static constexpr bool is_complex = false;
};

template <class T>
concept ExactScalar = ScalarTraits<T>::exact;

template <class T>
concept FloatScalar = !ScalarTraits<T>::exact;

inline std::string_view field_name(Field f) {
  switch (f) {
    case Field::real: return "real";
    case Field::complex: return "complex";
    case Field::rational: return "rational";
  }
  return "real";
}

inline Field parse_field(std::string_view s) {
  if (s == "real" || s == "float") return Field::real;
  if (s == "complex") return Field::complex;
  if (s == "rational") return Field::rational;
  throw std::invalid_argument("unknown field tag: " + std::string(s));
}

// Accepts "p/q", "p" or a decimal with optional exponent; result is canonical.
namespace detail {

// Integer(std::string) reads a leading 0 as an octal prefix.
inline Integer parse_decimal_integer(std::string s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("malformed integer literal");
  auto nz = s.find_first_not_of('0');
  Integer v(nz == std::string::npos ? std::string("0") : s.substr(nz));
  return negative ? Integer(-v) : v;
}

}  // namespace detail

inline Rational parse_rational(std::string_view text) {
  using detail::parse_decimal_integer;
  std::string s(text);
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num = parse_decimal_integer(s.substr(0, slash));
    Integer den = parse_decimal_integer(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in rational literal");
    return Rational(num, den);
  }
  auto dot = s.find_first_of(".eE");
  if (dot == std::string::npos) return Rational(parse_decimal_integer(s));
  std::string mantissa = s;
  long exponent = 0;
  auto e = s.find_first_of("eE");
  if (e != std::string::npos) {
    mantissa = s.substr(0, e);
    exponent = std::stol(s.substr(e + 1));
  }
  auto p = mantissa.find('.');
  if (p != std::string::npos) {
    exponent -= static_cast<long>(mantissa.size() - p - 1);
    mantissa.erase(p, 1);
  }
  Rational value{parse_decimal_integer(mantissa)};
  Integer ten = 10;
  Integer scale = boost::multiprecision::pow(ten, static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? value / Rational(scale) : value * Rational(scale);
}

inline std::string format_rational(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return static_cast<double>(x); }

inline int sign_of(const Rational& x) { return x.sign(); }
inline int sign_of(const Integer& x) { return x.sign(); }
inline int sign_of(double x) { return (x > 0) - (x < 0); }

}  // namespace orbitscope
