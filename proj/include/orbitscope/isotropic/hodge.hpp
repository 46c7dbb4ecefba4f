#pragma once

#include "orbitscope/exterior/sections.hpp"
#include "orbitscope/isotropic/structure.hpp"

namespace orbitscope {

enum class Duality { self_dual, anti_self_dual };

inline std::string to_string(Duality d) {
  return d == Duality::self_dual ? "self-dual" : "anti-self-dual";
}

inline Duality parse_duality(const std::string& s) {
  if (s == "self-dual" || s == "self" || s == "+") return Duality::self_dual;
  if (s == "anti-self-dual" || s == "anti" || s == "-") return Duality::anti_self_dual;
  throw InputError("unknown duality class: " + s);
}

// Parity rule: self-dual iff n - s is even.
inline Duality parity_duality(int n, int s) {
  return (n - s) % 2 == 0 ? Duality::self_dual : Duality::anti_self_dual;
}

struct HodgeReport {
  Duality duality = Duality::self_dual;
  double ratio = 0;     // (*beta)_I / beta_I at the largest |beta_I|
  double residual = 0;  // max |*beta - ratio beta| / max |beta|
};

inline Json hodge_to_json(const HodgeReport& h) {
  return Json{{"duality", to_string(h.duality)}, {"ratio", h.ratio}, {"residual", h.residual}};
}

// Sign of the shuffle (I, I^c) for 0-based increasing I.
inline int shuffle_sign(const MultiIndex& idx) {
  long sum = 0;
  for (size_t a = 0; a < idx.size(); ++a) sum += idx[a] - static_cast<long>(a);
  return sum % 2 == 0 ? 1 : -1;
}

// beta = Plucker coordinates of the basis. With vol = e_1 ^ ... ^ e_2n
// (coordinates (x, y) are positively oriented), alpha ^ *beta = <alpha,beta> vol
// gives (*beta)_{I^c} = sign(I, I^c) det((G B)[I, :]) by Cauchy-Binet.
template <class T>
HodgeReport hodge_report(const IsotropicPoint<T>& v, const TolerancePolicy& tol = {}) {
  const int n = v.n();
  const Matrix<T>& b = v.basis();
  Matrix<T> gb = v.structure().b_imag() * b;
  auto idx = multi_indices(2 * n, n);
  const size_t m = idx.size();
  std::vector<T> beta(m), star(m);
  std::vector<int> all(2 * n);
  for (int a = 0; a < 2 * n; ++a) all[a] = a;
  MultiIndex cols(n);
  for (int a = 0; a < n; ++a) cols[a] = a;
  // position of each multi-index for complement lookup
  auto position = [&](const MultiIndex& x) {
    return static_cast<size_t>(std::lower_bound(idx.begin(), idx.end(), x) - idx.begin());
  };
  for (size_t a = 0; a < m; ++a) {
    beta[a] = determinant(submatrix(b, idx[a], cols));
    MultiIndex comp;
    std::set_difference(all.begin(), all.end(), idx[a].begin(), idx[a].end(), std::back_inserter(comp));
    T g = determinant(submatrix(gb, idx[a], cols));
    star[position(comp)] = shuffle_sign(idx[a]) > 0 ? g : T(-g);
  }
  size_t pivot = 0;
  double big = 0;
  for (size_t a = 0; a < m; ++a) {
    double mag = std::abs(to_double(beta[a]));
    if (mag > big) {
      big = mag;
      pivot = a;
    }
  }
  HodgeReport out;
  if constexpr (ScalarTraits<T>::exact) {
    T ratio = star[pivot] / beta[pivot];
    for (size_t a = 0; a < m; ++a)
      if (star[a] != ratio * beta[a]) throw ConsistencyError("hodge: *beta is not proportional to beta");
    if (ratio != 1 && ratio != -1) throw ConsistencyError("hodge: eigenvalue of * is not +-1");
    out.ratio = static_cast<double>(ratio);
    out.residual = 0;
  } else {
    double ratio = star[pivot] / beta[pivot];
    double worst = 0;
    for (size_t a = 0; a < m; ++a) worst = std::max(worst, std::abs(star[a] - ratio * beta[a]));
    out.ratio = ratio;
    out.residual = worst / big;
    double bound = 1e3 * tol.threshold(1.0);
    if (out.residual > bound || std::abs(std::abs(ratio) - 1.0) > bound)
      throw ConsistencyError("hodge: *beta is not +-beta (input not maximally isotropic?)");
  }
  out.duality = out.ratio > 0 ? Duality::self_dual : Duality::anti_self_dual;
  return out;
}

template <class T>
Duality hodge_duality(const IsotropicPoint<T>& v, const TolerancePolicy& tol = {}) {
  return hodge_report(v, tol).duality;
}

}  // namespace orbitscope
