#include <gtest/gtest.h>

#include <set>

#include "orbitscope/isotropic/adapted_basis.hpp"
#include "orbitscope/isotropic/sampling.hpp"
#include "orbitscope/lie/algebra.hpp"

using namespace orbitscope;

namespace {

std::vector<IsotropicPoint<double>> orbit_points(int n, int per_label, Philox4x32& rng) {
  auto st = ComplexStructure<double>::standard(n);
  auto h = build_so_complex<double>(n);
  std::vector<IsotropicPoint<double>> out;
  for (auto d : {Duality::self_dual, Duality::anti_self_dual})
    for (auto& l : enumerate_isotropic_labels(n, d)) {
      auto v = isotropic_standard_representative(l, st);
      for (int t = 0; t < per_label; ++t) out.push_back(act(random_group_element(h, 1.0, rng), v));
    }
  return out;
}

}  // namespace

TEST(Structure, StandardInvariants) {
  for (int n = 1; n <= 6; ++n) {
    auto st = ComplexStructure<Rational>::standard(n);
    const auto& j = st->J();
    RationalMatrix id = RationalMatrix::Identity(2 * n, 2 * n);
    EXPECT_EQ(RationalMatrix(j * j), RationalMatrix(-id));
    EXPECT_EQ(inertia_of(st->b_imag()), (Inertia{n, n, 0}));
    EXPECT_EQ(st->b_real(), RationalMatrix(st->b_imag() * j));
    EXPECT_EQ(st->b_real(), RationalMatrix(st->b_real().transpose()));
    EXPECT_EQ(RationalMatrix(j.transpose() * st->b_real() * j), RationalMatrix(-st->b_real()));
    EXPECT_EQ(RationalMatrix(j.transpose() * st->b_imag() * j), RationalMatrix(-st->b_imag()));
  }
  auto one = ComplexStructure<double>::standard(1);
  RealMatrix j(2, 2), g(2, 2);
  j << 0, -1, 1, 0;
  g << 0, 1, 1, 0;
  EXPECT_EQ(one->J(), j);
  EXPECT_EQ(one->b_imag(), g);
}

TEST(Structure, RealifiedComplexBilinearForm) {
  // Re b and Im b agree with z^T w computed in complex arithmetic.
  Philox4x32 rng(4);
  const int n = 3;
  auto st = ComplexStructure<double>::standard(n);
  RealVector v = rng.gaussian(2 * n, 1), w = rng.gaussian(2 * n, 1);
  ComplexMatrix zv = complexify(v), zw = complexify(w);
  Complex b = (zv.transpose() * zw)(0, 0);
  EXPECT_NEAR((v.transpose() * st->b_real() * w)(0, 0), b.real(), 1e-12);
  EXPECT_NEAR((v.transpose() * st->b_imag() * w)(0, 0), b.imag(), 1e-12);
}

TEST(ClassifyIsotropic, RealAndImaginaryPoints) {
  for (int n = 1; n <= 5; ++n) {
    auto st = ComplexStructure<Rational>::standard(n);
    RationalMatrix re = RationalMatrix::Zero(2 * n, n), im = RationalMatrix::Zero(2 * n, n);
    re.topRows(n) = RationalMatrix::Identity(n, n);
    im.bottomRows(n) = RationalMatrix::Identity(n, n);
    auto lr = classify_isotropic(IsotropicPoint<Rational>(st, re));
    EXPECT_EQ(std::tie(lr.r, lr.s), std::make_tuple(n, 0));
    EXPECT_EQ(lr.duality, n % 2 == 0 ? Duality::self_dual : Duality::anti_self_dual);
    auto li = classify_isotropic(IsotropicPoint<Rational>(st, im));
    EXPECT_EQ(std::tie(li.r, li.s), std::make_tuple(0, n));
    EXPECT_EQ(li.duality, Duality::self_dual);
  }
}

TEST(ClassifyIsotropic, ComplexLine) {
  auto st = ComplexStructure<Rational>::standard(2);
  RationalMatrix b = RationalMatrix::Zero(4, 2);
  b(0, 0) = 1;  // z1 = e1 + i e2
  b(3, 0) = 1;
  b(1, 1) = -1;  // i z1
  b(2, 1) = 1;
  auto l = classify_isotropic(IsotropicPoint<Rational>(st, b));
  EXPECT_EQ(std::tie(l.r, l.s, l.nu, l.k, l.codim), std::make_tuple(0, 0, 2, 1, 1));
  EXPECT_EQ(isotropic_label_to_json(l).dump(), R"({"r":0,"s":0,"nu":2,"k":1,"duality":"self-dual","codim":1})");
}

TEST(ClassifyIsotropic, RejectsNonIsotropic) {
  auto st = ComplexStructure<double>::standard(2);
  RealMatrix b = RealMatrix::Identity(4, 2);
  b(2, 0) = 1;  // x1 + y1 is not isotropic
  EXPECT_THROW(IsotropicPoint<double>(st, b), InputError);
}

TEST(Hodge, HandComputedLine) {
  // n = 1, V = R: e_y ^ *e_x = <e_y, e_x> vol = e_x ^ e_y, so *e_x = -e_x.
  auto st = ComplexStructure<Rational>::standard(1);
  RationalMatrix b(2, 1);
  b << 1, 0;
  auto h = hodge_report(IsotropicPoint<Rational>(st, b));
  EXPECT_EQ(h.ratio, -1.0);
  EXPECT_EQ(h.duality, Duality::anti_self_dual);
}

TEST(Hodge, Examples) {
  auto st2 = ComplexStructure<double>::standard(2);
  RealMatrix re2 = RealMatrix::Zero(4, 2);
  re2.topRows(2) = RealMatrix::Identity(2, 2);
  EXPECT_EQ(hodge_duality(IsotropicPoint<double>(st2, re2)), Duality::self_dual);
  RealMatrix mixed = RealMatrix::Zero(4, 2);  // e1 real, i e2
  mixed(0, 0) = 1;
  mixed(3, 1) = 1;
  EXPECT_EQ(hodge_duality(IsotropicPoint<double>(st2, mixed)), Duality::anti_self_dual);
  auto st3 = ComplexStructure<double>::standard(3);
  RealMatrix re3 = RealMatrix::Zero(6, 3);
  re3.topRows(3) = RealMatrix::Identity(3, 3);
  EXPECT_EQ(hodge_duality(IsotropicPoint<double>(st3, re3)), Duality::anti_self_dual);
}

TEST(EnumerateIsotropic, Examples) {
  auto key = [](const std::vector<IsotropicLabel>& ls) {
    std::set<std::pair<int, int>> out;
    for (auto& l : ls) out.insert({l.r, l.s});
    return out;
  };
  EXPECT_EQ(key(enumerate_isotropic_labels(2, Duality::self_dual)),
            (std::set<std::pair<int, int>>{{2, 0}, {0, 2}, {0, 0}}));
  EXPECT_EQ(key(enumerate_isotropic_labels(2, Duality::anti_self_dual)), (std::set<std::pair<int, int>>{{1, 1}}));
  EXPECT_EQ(key(enumerate_isotropic_labels(3, Duality::self_dual)),
            (std::set<std::pair<int, int>>{{2, 1}, {0, 3}, {0, 1}}));
  for (int n = 1; n <= 6; ++n) {
    size_t total = 0;
    for (int r = 0; r <= n; ++r)
      for (int s = 0; r + s <= n; ++s) total += (n - r - s) % 2 == 0;
    EXPECT_EQ(enumerate_isotropic_labels(n, Duality::self_dual).size() +
                  enumerate_isotropic_labels(n, Duality::anti_self_dual).size(),
              total);
  }
}

TEST(StandardIsotropic, RoundTripExact) {
  for (int n = 1; n <= 5; ++n) {
    auto st = ComplexStructure<Rational>::standard(n);
    for (auto d : {Duality::self_dual, Duality::anti_self_dual})
      for (auto& l : enumerate_isotropic_labels(n, d)) {
        auto c = classify_isotropic_full(isotropic_standard_representative(l, st));
        EXPECT_EQ(c.label, l);
        EXPECT_TRUE(c.parity_agrees);
      }
  }
  auto st = ComplexStructure<Rational>::standard(2);
  IsotropicLabel wrong = make_isotropic_label(2, 1, 1);
  wrong.duality = Duality::self_dual;
  EXPECT_THROW(isotropic_standard_representative(wrong, st), EmptyOrbitError);
}

TEST(Equivariance, ComplexOrthogonalGroup) {
  for (int n = 2; n <= 4; ++n) {
    auto st = ComplexStructure<double>::standard(n);
    auto h = build_so_complex<double>(n);
    Philox4x32 rng(n);
    std::vector<IsotropicLabel> labels;
    for (auto d : {Duality::self_dual, Duality::anti_self_dual})
      for (auto& l : enumerate_isotropic_labels(n, d)) labels.push_back(l);
    for (int t = 0; t < 500; ++t) {
      const auto& l = labels[t % labels.size()];
      RealMatrix g = random_group_element(h, 1.0, rng);
      EXPECT_LE((g.transpose() * st->b_imag() * g - st->b_imag()).norm(), 1e-9);
      EXPECT_LE((g * st->J() - st->J() * g).norm(), 1e-9);
      EXPECT_EQ(classify_isotropic(act(g, isotropic_standard_representative(l, st))), l);
    }
  }
}

TEST(AdaptedBasis, Examples) {
  auto st = ComplexStructure<double>::standard(3);
  RealMatrix re = RealMatrix::Zero(6, 3);
  re.topRows(3) = RealMatrix::Identity(3, 3);
  auto ab = adapted_basis(IsotropicPoint<double>(st, re));
  EXPECT_EQ(ab.k, 0);
  EXPECT_EQ(ab.r, 3);
  EXPECT_LE((ab.gram - ComplexMatrix::Identity(3, 3)).norm(), 1e-12);

  auto st2 = ComplexStructure<double>::standard(2);
  auto v = isotropic_standard_representative(make_isotropic_label(2, 0, 0), st2);
  auto ab2 = adapted_basis(v);
  EXPECT_EQ(ab2.k, 1);
  ComplexMatrix hyp(2, 2);
  hyp << 0, 1, 1, 0;
  EXPECT_LE((ab2.gram - hyp).norm(), 1e-12);
}

TEST(AdaptedBasis, RandomPointsResidualParityAndRoundTrip) {
  for (int n = 2; n <= 4; ++n) {
    auto st = ComplexStructure<double>::standard(n);
    Philox4x32 rng(100 + n);
    auto pts = orbit_points(n, 40, rng);
    for (int t = 0; t < 300; ++t)
      pts.push_back(sample_isotropic(st, t % 2 ? Duality::self_dual : Duality::anti_self_dual, rng));
    for (const auto& v : pts) {
      auto c = classify_isotropic_full(v);
      EXPECT_EQ(c.label.nu % 2, 0);
      EXPECT_EQ(c.hodge.duality, parity_duality(n, c.label.s));
      auto ab = adapted_basis(v);
      EXPECT_LE(ab.residual, 1e-8);
      EXPECT_EQ(ab.k, c.label.k);
      EXPECT_EQ(std::tie(ab.r, ab.s), std::tie(c.label.r, c.label.s));
      EXPECT_EQ(classify_isotropic(IsotropicPoint<double>(st, ab.span_of_v())), c.label);
    }
  }
}

TEST(Sampling, GraphModel) {
  auto st = ComplexStructure<double>::standard(3);
  Philox4x32 rng(1);
  auto z1 = sample_isotropic(st, Duality::anti_self_dual, rng, 0.0);
  RealMatrix re = RealMatrix::Zero(6, 3);
  re.topRows(3) = RealMatrix::Identity(3, 3);
  EXPECT_TRUE(same_span(z1.basis(), re));
  EXPECT_EQ(sample_isotropic(st, Duality::self_dual, 7).basis(), sample_isotropic(st, Duality::self_dual, 7).basis());
  for (int t = 0; t < 10000; ++t) {
    Duality d = t % 2 ? Duality::self_dual : Duality::anti_self_dual;
    auto l = classify_isotropic(sample_isotropic(st, d, rng));
    EXPECT_EQ(l.nu, 0);
    EXPECT_EQ(l.duality, d);
  }
}

TEST(Perturbation, MonotoneWithParity) {
  for (int n = 2; n <= 4; ++n) {
    auto st = ComplexStructure<double>::standard(n);
    Philox4x32 rng(200 + n);
    for (auto d : {Duality::self_dual, Duality::anti_self_dual})
      for (auto& l : enumerate_isotropic_labels(n, d)) {
        auto v = isotropic_standard_representative(l, st);
        for (int t = 0; t < 100; ++t) {
          auto w = classify_isotropic(perturb(v, 1e-3, rng));
          EXPECT_GE(w.r, l.r);
          EXPECT_GE(w.s, l.s);
          EXPECT_EQ((w.s - l.s) % 2, 0);
          EXPECT_EQ(w.duality, l.duality);
        }
      }
  }
}

TEST(IsotropicJson, RoundTrip) {
  auto st = ComplexStructure<double>::standard(2);
  auto v = sample_isotropic(st, Duality::self_dual, 3);
  auto back = isotropic_from_json<double>(isotropic_to_json(v));
  EXPECT_TRUE(same_span(v.basis(), back.basis()));
}
