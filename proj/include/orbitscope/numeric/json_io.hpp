#pragma once

#include <nlohmann/json.hpp>

#include "orbitscope/numeric/matrix.hpp"

namespace orbitscope {

using Json = nlohmann::ordered_json;

namespace detail {

inline Rational rational_from_json(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) return Rational(v.get<double>());
  throw InputError("matrix literal: rational entry must be a \"p/q\" string or a number");
}

inline double real_from_json(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return static_cast<double>(parse_rational(v.get<std::string>()));
  throw InputError("matrix literal: real entry must be a number");
}

}  // namespace detail

inline ScalarMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("matrix literal must be an object");
  for (const char* key : {"rows", "cols", "data"})
    if (!j.contains(key)) throw InputError(std::string("matrix literal: missing \"") + key + "\"");
  long rows = j.at("rows").get<long>(), cols = j.at("cols").get<long>();
  if (rows < 0 || cols < 0) throw InputError("matrix literal: negative dimension");
  Field field = parse_field(j.value("field", std::string("real")));
  const Json& data = j.at("data");
  if (!data.is_array() || static_cast<long>(data.size()) != rows * cols)
    throw InputError("matrix literal: data length must equal rows*cols");
  auto at = [&](long i, long jj) -> const Json& { return data[static_cast<size_t>(i * cols + jj)]; };
  switch (field) {
    case Field::real: {
      RealMatrix m(rows, cols);
      for (long i = 0; i < rows; ++i)
        for (long c = 0; c < cols; ++c) m(i, c) = detail::real_from_json(at(i, c));
      return m;
    }
    case Field::complex: {
      ComplexMatrix m(rows, cols);
      for (long i = 0; i < rows; ++i)
        for (long c = 0; c < cols; ++c) {
          const Json& e = at(i, c);
          if (e.is_number())
            m(i, c) = Complex(e.get<double>(), 0.0);
          else if (e.is_array() && e.size() == 2)
            m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
          else
            throw InputError("matrix literal: complex entry must be [re, im]");
        }
      return m;
    }
    case Field::rational: {
      RationalMatrix m(rows, cols);
      for (long i = 0; i < rows; ++i)
        for (long c = 0; c < cols; ++c) m(i, c) = detail::rational_from_json(at(i, c));
      return m;
    }
  }
  throw InputError("matrix literal: unknown field");
}

template <class T>
Json matrix_to_json(const Matrix<T>& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["field"] = std::string(field_name(ScalarTraits<T>::field));
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if constexpr (std::is_same_v<T, Complex>)
        data.push_back(Json::array({m(i, c).real(), m(i, c).imag()}));
      else if constexpr (std::is_same_v<T, Rational>)
        data.push_back(format_rational(m(i, c)));
      else
        data.push_back(m(i, c));
    }
  j["data"] = std::move(data);
  return j;
}

inline Json matrix_to_json(const ScalarMatrix& m) {
  switch (m.field()) {
    case Field::real: return matrix_to_json(m.get<double>());
    case Field::complex: return matrix_to_json(m.get<Complex>());
    case Field::rational: return matrix_to_json(m.get<Rational>());
  }
  return {};
}

inline Json inertia_to_json(const Inertia& in) {
  return Json{{"positive", in.positive}, {"negative", in.negative}, {"nullity", in.nullity}};
}

}  // namespace orbitscope
