#pragma once

#include <vector>

#include "orbitscope/grassmann/subspace.hpp"

namespace orbitscope {

using MultiIndex = std::vector<int>;

// Strictly increasing k-subsets of {0..n-1} in lexicographic order.
inline std::vector<MultiIndex> multi_indices(int n, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || k > n) return out;
  MultiIndex idx(k);
  for (int j = 0; j < k; ++j) idx[j] = j;
  while (true) {
    out.push_back(idx);
    int j = k - 1;
    while (j >= 0 && idx[j] == n - k + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int l = j + 1; l < k; ++l) idx[l] = idx[l - 1] + 1;
  }
  return out;
}

template <class T>
Matrix<T> submatrix(const Matrix<T>& m, const MultiIndex& rows, const MultiIndex& cols) {
  Matrix<T> out(rows.size(), cols.size());
  for (size_t a = 0; a < rows.size(); ++a)
    for (size_t b = 0; b < cols.size(); ++b) out(a, b) = m(rows[a], cols[b]);
  return out;
}

// k-th compound: minors det(M[I,J]) over lexicographic multi-indices.
template <class T>
Matrix<T> compound_matrix(const Matrix<T>& m, int k) {
  auto rows = multi_indices(static_cast<int>(m.rows()), k);
  auto cols = multi_indices(static_cast<int>(m.cols()), k);
  Matrix<T> out(rows.size(), cols.size());
  for (size_t a = 0; a < rows.size(); ++a)
    for (size_t b = 0; b < cols.size(); ++b) out(a, b) = determinant(submatrix(m, rows[a], cols[b]));
  return out;
}

template <class T>
struct SectionValue {
  int k = 0;
  Matrix<T> gram;
};

template <class T>
SectionValue<T> gram_determinant_form(const Matrix<T>& restriction, int k) {
  if (restriction.rows() != restriction.cols())
    throw InputError("gram_determinant_form: restriction is not square");
  if (k < 1 || k > restriction.rows()) throw InputError("gram_determinant_form: k out of range");
  return {k, compound_matrix(restriction, k)};
}

template <class T>
Json section_to_json(const SectionValue<T>& v) {
  return Json{{"k", v.k}, {"gram", matrix_to_json(v.gram)}};
}

template <class T>
SectionValue<T> sigma_k_at(const SubspacePoint<T>& v, int k) {
  return gram_determinant_form(restrict_form(v), k);
}

struct ZeroLocusVerdict {
  int k = 0;
  bool zero = false;
  double norm = 0;       // Frobenius norm of sigma_k
  double threshold = 0;  // theta scaled to degree k
  double margin = 0;     // smallest singular value of the restriction
};

inline Json verdict_to_json(const ZeroLocusVerdict& v) {
  return Json{{"k", v.k}, {"zero", v.zero}, {"norm", v.norm}, {"threshold", v.threshold},
              {"margin", v.margin}};
}

// sigma_k entries are homogeneous of degree k in the restriction, so theta
// is applied to |M|^k.
template <class T>
ZeroLocusVerdict zero_locus_verdict(const Matrix<T>& restriction, int k, const TolerancePolicy& tol = {},
                                    double scale_hint = 0.0) {
  auto sec = gram_determinant_form(restriction, k);
  ZeroLocusVerdict out;
  out.k = k;
  if constexpr (ScalarTraits<T>::exact) {
    out.zero = is_zero_matrix(sec.gram);
    out.norm = to_real(sec.gram).norm();
    auto sv = singular_values(to_real(restriction));
    out.margin = sv.size() ? sv.minCoeff() : 0.0;
  } else {
    auto sv = singular_values(restriction);
    double scale = std::max(sv.size() ? sv.maxCoeff() : 0.0, scale_hint);
    out.margin = sv.size() ? sv.minCoeff() : 0.0;
    out.norm = sec.gram.norm();
    out.threshold = tol.threshold(std::pow(scale, k));
    if (tol.in_band(out.norm, out.threshold))
      throw AmbiguityError("sigma_" + std::to_string(k) + ": value inside tolerance band", {}, {},
                           out.margin);
    out.zero = out.norm <= out.threshold;
  }
  return out;
}

template <class T>
bool zero_locus_indicator(const SubspacePoint<T>& v, int k, const TolerancePolicy& tol = {}) {
  return zero_locus_verdict(restrict_form(v), k, tol, restriction_scale(v)).zero;
}

enum class VarietyKind { grassmann, isotropic };

struct BggContext {
  VarietyKind kind = VarietyKind::grassmann;
  int n = 0;  // complex dimension for the isotropic case
};

inline int bgg_order(int k, int i, BggContext ctx) {
  if (k < 1 || k > i) throw InputError("bgg_order: k out of range");
  if (ctx.kind == VarietyKind::grassmann) return k < i ? 1 : 3;
  if (i != ctx.n) throw InputError("bgg_order: isotropic case needs i = n");
  if (k < ctx.n - 1) return 1;
  return k == ctx.n - 1 ? 2 : 3;
}

}  // namespace orbitscope
