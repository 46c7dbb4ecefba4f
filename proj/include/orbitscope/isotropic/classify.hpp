#pragma once

#include "orbitscope/isotropic/hodge.hpp"

namespace orbitscope {

struct IsotropicLabel {
  int n = 0;
  int r = 0, s = 0, nu = 0;
  int k = 0;  // nu = 2k
  Duality duality = Duality::self_dual;
  int codim = 0;  // k^2

  bool operator==(const IsotropicLabel&) const = default;
  auto operator<=>(const IsotropicLabel&) const = default;
};

inline IsotropicLabel make_isotropic_label(int n, int r, int s) {
  int nu = n - r - s;
  if (r < 0 || s < 0 || nu < 0 || nu % 2 != 0)
    throw InputError("isotropic label: need r, s >= 0, r + s <= n and n - r - s even");
  int k = nu / 2;
  return IsotropicLabel{n, r, s, nu, k, parity_duality(n, s), k * k};
}

inline std::string to_string(const IsotropicLabel& l) {
  return "(" + std::to_string(l.r) + "," + std::to_string(l.s) + ")" +
         (l.duality == Duality::self_dual ? "+" : "-");
}

inline Json isotropic_label_to_json(const IsotropicLabel& l) {
  return Json{{"r", l.r},   {"s", l.s},       {"nu", l.nu}, {"k", l.k},
              {"duality", to_string(l.duality)}, {"codim", l.codim}};
}

inline std::vector<IsotropicLabel> enumerate_isotropic_labels(int n, Duality d) {
  if (n < 1) throw InputError("enumerate_isotropic_labels: need n >= 1");
  std::vector<IsotropicLabel> out;
  for (int r = n; r >= 0; --r)
    for (int s = 0; r + s <= n; ++s)
      if ((n - r - s) % 2 == 0 && parity_duality(n, s) == d) out.push_back(make_isotropic_label(n, r, s));
  return out;
}

struct IsotropicClassification {
  IsotropicLabel label;
  HodgeReport hodge;
  bool parity_agrees = true;
};

template <class T>
IsotropicClassification classify_isotropic_full(const IsotropicPoint<T>& v, const TolerancePolicy& tol = {}) {
  const int n = v.n();
  Inertia in = inertia_of(restrict_real_form(v), tol, restriction_scale(v));
  if (in.nullity % 2 != 0)
    throw ConsistencyError("classify_isotropic: odd nullity " + std::to_string(in.nullity) +
                           " (isotropy or tolerance failure)");
  IsotropicClassification out{make_isotropic_label(n, in.positive, in.negative), hodge_report(v, tol), true};
  out.parity_agrees = out.hodge.duality == out.label.duality;
  if (!out.parity_agrees)
    throw ConsistencyError("classify_isotropic: Hodge verdict disagrees with the parity rule");
  return out;
}

template <class T>
IsotropicLabel classify_isotropic(const IsotropicPoint<T>& v, const TolerancePolicy& tol = {}) {
  return classify_isotropic_full(v, tol).label;
}

// z_j = e_{2j-1} + i e_{2j} (j <= k) with z_j and i z_j in V; then r real
// directions e_a and s imaginary directions i e_a.
template <class T>
IsotropicPoint<T> isotropic_standard_representative(const IsotropicLabel& label,
                                                    const ComplexStructurePtr<T>& structure,
                                                    const TolerancePolicy& tol = {}) {
  const int n = structure->n();
  IsotropicLabel check = make_isotropic_label(n, label.r, label.s);
  if (label.n != 0 && label.n != n) throw InputError("isotropic representative: label is for another n");
  if (label.duality != check.duality)
    throw EmptyOrbitError("empty orbit: " + to_string(label) + " violates the duality parity rule");
  Matrix<T> b = Matrix<T>::Zero(2 * n, n);
  int c = 0;
  for (int j = 0; j < check.k; ++j) {
    int a = 2 * j, a2 = 2 * j + 1;
    b(a, c) = T(1);  // z_j: x = e_a, y = e_a2
    b(n + a2, c) = T(1);
    ++c;
    b(a2, c) = T(-1);  // i z_j: x = -e_a2, y = e_a
    b(n + a, c) = T(1);
    ++c;
  }
  int a = 2 * check.k;
  for (int j = 0; j < label.r; ++j) b(a++, c++) = T(1);
  for (int j = 0; j < label.s; ++j) b(n + a++, c++) = T(1);
  return IsotropicPoint<T>(structure, std::move(b), tol);
}

}  // namespace orbitscope
