#pragma once

#include "orbitscope/grassmann/quadratic_space.hpp"
#include "orbitscope/numeric/random.hpp"

namespace orbitscope {

// A point of Gr(i, R^n). Float bases are orthonormalized on construction.
template <class T>
class SubspacePoint {
 public:
  SubspacePoint(QuadraticSpacePtr<T> ambient, Matrix<T> basis, const TolerancePolicy& tol = {},
                bool canonicalize = true)
      : ambient_(std::move(ambient)), basis_(std::move(basis)) {
    if (!ambient_) throw InputError("subspace: missing ambient space");
    if (basis_.rows() != ambient_->dimension())
      throw InputError("subspace: basis row count differs from ambient dimension");
    if (basis_.cols() > 0 && certified_rank(basis_, tol, "subspace basis") != basis_.cols())
      throw InputError("subspace: basis columns are dependent");
    if constexpr (!ScalarTraits<T>::exact) {
      if (canonicalize) {
        basis_ = orthonormalize(basis_);
        canonical_ = true;
      }
    }
  }

  const QuadraticSpace<T>& ambient() const { return *ambient_; }
  const QuadraticSpacePtr<T>& ambient_ptr() const { return ambient_; }
  const Matrix<T>& basis() const { return basis_; }
  int dimension() const { return static_cast<int>(basis_.cols()); }
  bool canonical() const { return canonical_; }

 private:
  QuadraticSpacePtr<T> ambient_;
  Matrix<T> basis_;
  bool canonical_ = false;
};

template <class T>
Matrix<T> restrict_form(const SubspacePoint<T>& v) {
  return v.basis().transpose() * v.ambient().form() * v.basis();
}

// Scale of restricted forms: |F| |B|^2.
template <class T>
double restriction_scale(const SubspacePoint<T>& v) {
  double b = spectral_norm(v.basis());
  return spectral_norm(v.ambient().form()) * b * b;
}

template <class T>
bool same_subspace(const SubspacePoint<T>& a, const SubspacePoint<T>& b,
                   const TolerancePolicy& tol = {}) {
  return a.ambient().dimension() == b.ambient().dimension() && same_span(a.basis(), b.basis(), tol);
}

// g is expected to preserve the ambient form.
template <class T>
SubspacePoint<T> act(const Matrix<T>& g, const SubspacePoint<T>& v, const TolerancePolicy& tol = {}) {
  return SubspacePoint<T>(v.ambient_ptr(), g * v.basis(), tol);
}

inline SubspacePoint<double> perturb(const SubspacePoint<double>& v, double delta, Philox4x32& rng,
                                     const TolerancePolicy& tol = {}) {
  RealMatrix e = rng.gaussian(v.basis().rows(), v.basis().cols());
  return SubspacePoint<double>(v.ambient_ptr(), v.basis() + (delta / e.norm()) * e, tol);
}

inline SubspacePoint<double> sample_uniform(const QuadraticSpacePtr<double>& ambient, int i,
                                            Philox4x32& rng, const TolerancePolicy& tol = {}) {
  const int n = ambient->dimension();
  if (i < 0 || i > n) throw InputError("sample_uniform: subspace dimension out of range");
  for (int attempt = 0; attempt < 16; ++attempt) {
    RealMatrix g = rng.gaussian(n, i);
    auto rep = rank_report(g, tol);
    if (rep.rank == i && !rep.ambiguous) return SubspacePoint<double>(ambient, g, tol);
  }
  throw ConsistencyError("sample_uniform: repeated degenerate draws");
}

inline SubspacePoint<double> sample_uniform(const QuadraticSpacePtr<double>& ambient, int i,
                                            std::uint64_t seed, const TolerancePolicy& tol = {}) {
  Philox4x32 rng(seed);
  return sample_uniform(ambient, i, rng, tol);
}

template <class T>
SubspacePoint<T> subspace_from_json(const Json& j, const TolerancePolicy& tol = {}) {
  if (!j.contains("ambient") || !j.contains("basis"))
    throw InputError("subspace point: needs \"ambient\" and \"basis\"");
  auto ambient = quadratic_space_from_json<T>(j.at("ambient"), tol);
  return SubspacePoint<T>(ambient, matrix_from_json(j.at("basis")).as<T>(), tol);
}

template <class T>
Json subspace_to_json(const SubspacePoint<T>& v) {
  return Json{{"ambient", Json{{"form", matrix_to_json(v.ambient().form())}}},
              {"basis", matrix_to_json(v.basis())}};
}

}  // namespace orbitscope
