#pragma once

#include <cmath>

#include "orbitscope/numeric/matrix.hpp"

namespace orbitscope {

// Scaling and squaring with a fixed [13/13] Pade approximant (Higham 2005).
inline RealMatrix expm(const RealMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("expm: matrix is not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  if (a.isZero(0.0)) return RealMatrix::Identity(n, n);
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  RealMatrix x = a / std::ldexp(1.0, s);
  RealMatrix id = RealMatrix::Identity(n, n);
  RealMatrix x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
  RealMatrix u = x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 +
                      b[3] * x2 + b[1] * id);
  RealMatrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 + b[2] * x2 +
                 b[0] * id;
  RealMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

}  // namespace orbitscope
