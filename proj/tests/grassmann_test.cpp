#include <gtest/gtest.h>

#include <set>

#include "orbitscope/grassmann/classify.hpp"
#include "orbitscope/grassmann/flags.hpp"
#include "orbitscope/lie/algebra.hpp"

using namespace orbitscope;

namespace {

RealMatrix cols(int n, std::initializer_list<std::initializer_list<double>> vs) {
  RealMatrix m = RealMatrix::Zero(n, static_cast<Index>(vs.size()));
  Index j = 0;
  for (auto& v : vs) {
    Index i = 0;
    for (double x : v) m(i++, j) = x;
    ++j;
  }
  return m;
}

// Oracle via Witt decomposition: W = W0 + radical N with W0 nondegenerate of
// signature (r,s); N is totally isotropic inside W0^perp, whose Witt index
// is min(p-r, q-s).
bool witt_realizable(int p, int q, int r, int s, int nu) {
  return r <= p && s <= q && nu <= std::min(p - r, q - s);
}

}  // namespace

TEST(RestrictForm, Examples) {
  auto amb = QuadraticSpace<double>::standard(2, 2);
  EXPECT_TRUE(restrict_form(SubspacePoint<double>(amb, cols(4, {{1, 0, 0, 0}, {0, 1, 0, 0}})))
                  .isApprox(RealMatrix::Identity(2, 2)));
  auto ramb = QuadraticSpace<Rational>::standard(2, 2);
  RationalMatrix iso = to_rational(cols(4, {{1, 0, 1, 0}}));
  EXPECT_EQ(restrict_form(SubspacePoint<Rational>(ramb, iso)), RationalMatrix::Zero(1, 1));
  RationalMatrix b = to_rational(cols(4, {{1, 0, 1, 0}, {0, 1, 0, 0}}));
  RationalMatrix expected = RationalMatrix::Zero(2, 2);
  expected(1, 1) = 1;
  EXPECT_EQ(restrict_form(SubspacePoint<Rational>(ramb, b)), expected);
}

TEST(Classify, Examples) {
  auto amb = QuadraticSpace<double>::standard(2, 2);
  auto l = classify(SubspacePoint<double>(amb, cols(4, {{1, 0, 0, 0}, {0, 1, 0, 0}})));
  EXPECT_EQ(std::tie(l.r, l.s, l.nu, l.codim), std::make_tuple(2, 0, 0, 0));
  l = classify(SubspacePoint<double>(amb, cols(4, {{1, 0, 1, 0}, {0, 1, 0, 1}})));
  EXPECT_EQ(std::tie(l.r, l.s, l.nu, l.codim), std::make_tuple(0, 0, 2, 3));
  l = classify(SubspacePoint<double>(amb, cols(4, {{1, 0, 0, 0}, {0, 1, 0, 1}})));
  EXPECT_EQ(std::tie(l.r, l.s, l.nu, l.codim), std::make_tuple(1, 0, 1, 1));
  EXPECT_EQ(label_to_json(l).dump(), R"({"r":1,"s":0,"nu":1,"codim":1})");
}

TEST(Classify, NearBoundaryCarriesBothLabels) {
  auto amb = QuadraticSpace<double>::standard(2, 2);
  // e1 + (1 + 2e-9) e3: restricted value ~ -4e-9, inside the band.
  SubspacePoint<double> v(amb, cols(4, {{1, 0, 1 + 2e-9, 0}}));
  try {
    classify(v);
    FAIL() << "expected ambiguity";
  } catch (const AmbiguityError& e) {
    EXPECT_NE(std::string(e.what()).find("(0,0,1)"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("(0,1,0)"), std::string::npos);
  }
}

TEST(EnumerateLabels, SmallCases) {
  auto l = enumerate_labels(1, 1, 1);
  std::set<std::tuple<int, int, int>> got;
  for (auto& x : l) got.insert({x.r, x.s, x.nu});
  EXPECT_EQ(got, (std::set<std::tuple<int, int, int>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  l = enumerate_labels(2, 0, 1);
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(std::tie(l[0].r, l[0].s, l[0].nu), std::make_tuple(1, 0, 0));
  EXPECT_EQ(enumerate_labels(2, 2, 2).size(), 6u);
}

TEST(EnumerateLabels, MatchesWittOracle) {
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q)
      for (int i = 0; i <= p + q; ++i) {
        std::set<std::tuple<int, int, int>> oracle, got;
        for (int r = 0; r <= i; ++r)
          for (int s = 0; r + s <= i; ++s)
            if (witt_realizable(p, q, r, s, i - r - s)) oracle.insert({r, s, i - r - s});
        for (auto& x : enumerate_labels(p, q, i)) {
          got.insert({x.r, x.s, x.nu});
          EXPECT_EQ(x.codim, x.nu * (x.nu + 1) / 2);
          EXPECT_LE(x.nu, std::min(p, q));
        }
        EXPECT_EQ(got, oracle) << p << "," << q << "," << i;
      }
}

TEST(StandardRepresentative, RoundTripExactAndFloat) {
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q) {
      if (p + q == 0) continue;
      auto ramb = QuadraticSpace<Rational>::standard(p, q);
      auto famb = QuadraticSpace<double>::standard(p, q);
      for (int i = 0; i <= p + q; ++i)
        for (auto& l : enumerate_labels(p, q, i)) {
          EXPECT_EQ(classify(standard_representative(l, ramb)), l);
          EXPECT_EQ(classify(standard_representative(l, famb)), l);
        }
    }
}

TEST(StandardRepresentative, EmptyOrbits) {
  auto amb = QuadraticSpace<double>::standard(2, 2);
  EXPECT_THROW(standard_representative(make_label(2, 2, 0, 0, 3), amb), EmptyOrbitError);
  // A 3-space with a 2-dim radical would need that radical inside the
  // orthocomplement of the positive line, of signature (1,2): Witt index 1.
  EXPECT_FALSE(witt_realizable(2, 2, 1, 0, 2));
  EXPECT_THROW(standard_representative(make_label(2, 2, 1, 0, 2), amb), EmptyOrbitError);
  auto s2 = standard_representative(make_label(2, 2, 2, 0, 0), amb);
  EXPECT_TRUE(same_subspace(s2, SubspacePoint<double>(amb, cols(4, {{1, 0, 0, 0}, {0, 1, 0, 0}}))));
}

TEST(StandardRepresentative, NonDiagonalAmbient) {
  RealMatrix f(3, 3);
  f << 2, 1, 0, 1, -1, 0.5, 0, 0.5, 3;
  auto amb = std::make_shared<const QuadraticSpace<double>>(f);
  EXPECT_EQ(amb->p(), 2);
  EXPECT_EQ(amb->q(), 1);
  for (int i = 0; i <= 3; ++i)
    for (auto& l : enumerate_labels(2, 1, i)) EXPECT_EQ(classify(standard_representative(l, amb)), l);
}

TEST(QuadraticSpace, RejectsDegenerateAndIrrationalSquares) {
  EXPECT_THROW(QuadraticSpace<double>(RealMatrix(RealMatrix::Zero(2, 2))), InputError);
  RationalMatrix hyperbolic = RationalMatrix::Zero(2, 2);
  hyperbolic(0, 1) = hyperbolic(1, 0) = 1;
  auto amb = std::make_shared<const QuadraticSpace<Rational>>(hyperbolic);
  EXPECT_EQ(amb->inertia(), (Inertia{1, 1, 0}));
  EXPECT_FALSE(amb->has_diagonalizing_basis());
  EXPECT_THROW(standard_representative(make_label(1, 1, 1, 0, 0), amb), InputError);
}

TEST(ClosureOrder, Examples) {
  EXPECT_TRUE(closure_partial_order(make_label(2, 2, 2, 0, 0), make_label(2, 2, 1, 0, 1)));
  EXPECT_FALSE(closure_partial_order(make_label(2, 2, 1, 0, 1), make_label(2, 2, 0, 1, 1)));
  EXPECT_TRUE(closure_partial_order(make_label(2, 2, 1, 0, 1), make_label(2, 2, 1, 0, 1)));
  EXPECT_THROW(closure_partial_order(make_label(2, 2, 1, 0, 1), make_label(3, 2, 1, 0, 1)), InputError);
}

TEST(Sampling, DeterministicGenericAndFull) {
  auto amb = QuadraticSpace<double>::standard(2, 2);
  EXPECT_EQ(sample_uniform(amb, 2, 99).basis(), sample_uniform(amb, 2, 99).basis());
  Philox4x32 rng(5);
  for (int j = 0; j < 10000; ++j) EXPECT_EQ(classify(sample_uniform(amb, 2, rng)).nu, 0);
  auto full = sample_uniform(amb, 4, 3);
  EXPECT_TRUE(same_span(full.basis(), RealMatrix(RealMatrix::Identity(4, 4))));
}

TEST(Equivariance, RandomGroupElementsPreserveLabels) {
  for (auto [p, q, i] : {std::tuple{2, 2, 2}, {3, 2, 2}, {2, 1, 1}, {3, 3, 3}}) {
    auto amb = QuadraticSpace<double>::standard(p, q);
    auto h = build_so_pq<double>(p, q);
    Philox4x32 rng(p * 100 + q * 10 + i);
    auto labels = enumerate_labels(p, q, i);
    for (int t = 0; t < 500; ++t) {
      RealMatrix g = random_group_element(h, 1.0, rng);
      const auto& l = labels[t % labels.size()];
      EXPECT_EQ(classify(act(g, standard_representative(l, amb))), l);
    }
  }
}

TEST(Perturbation, LabelsOnlyMoveUp) {
  auto amb = QuadraticSpace<double>::standard(3, 2);
  Philox4x32 rng(17);
  for (auto& l : enumerate_labels(3, 2, 2)) {
    auto v = standard_representative(l, amb);
    for (int t = 0; t < 200; ++t) {
      auto w = classify(perturb(v, 1e-3, rng));
      EXPECT_GE(w.r, l.r);
      EXPECT_GE(w.s, l.s);
      EXPECT_TRUE(closure_partial_order(w, l));
    }
  }
}

TEST(Flags, Examples) {
  auto amb = QuadraticSpace<double>::standard(2, 2);
  SubspacePoint<double> w2(amb, cols(4, {{1, 0, 0, 0}, {0, 0, 1, 0}}));
  SubspacePoint<double> w1(amb, cols(4, {{1, 0, 1, 0}}));
  // W1 ∩ W1^perp = W1 (dim 1); W2^perp = span(e2, e4) meets W1 in 0.
  auto l = classify_flag(TwoStepFlagPoint<double>(w1, w2));
  EXPECT_EQ(l.ell, 1);
  EXPECT_EQ(l.inner.nu, 1);
  EXPECT_EQ(std::tie(l.outer.r, l.outer.s), std::make_tuple(1, 1));
  EXPECT_EQ(classify_flag(TwoStepFlagPoint<double>(w1, w1)).ell, 0);
  SubspacePoint<double> e1(amb, cols(4, {{1, 0, 0, 0}}));
  EXPECT_EQ(classify_flag(TwoStepFlagPoint<double>(e1, w2)).ell, 0);
  EXPECT_THROW(TwoStepFlagPoint<double>(SubspacePoint<double>(amb, cols(4, {{0, 1, 0, 0}})), w2), InputError);
}

TEST(Flags, ExactMatchesFloat) {
  auto amb = QuadraticSpace<Rational>::standard(2, 2);
  RationalMatrix b2 = to_rational(cols(4, {{1, 0, 0, 0}, {0, 0, 1, 0}}));
  RationalMatrix b1 = to_rational(cols(4, {{1, 0, 1, 0}}));
  auto l = classify_flag(TwoStepFlagPoint<Rational>(SubspacePoint<Rational>(amb, b1), SubspacePoint<Rational>(amb, b2)));
  EXPECT_EQ(l.ell, 1);
}

TEST(Flags, ConstraintsHoldOnRandomAndStructuredFlags) {
  for (auto [p, q] : {std::pair{2, 2}, {3, 2}, {3, 3}}) {
    auto amb = QuadraticSpace<double>::standard(p, q);
    auto h = build_so_pq<double>(p, q);
    Philox4x32 rng(p * 7 + q);
    const int n = p + q;
    for (int t = 0; t < 10000; ++t) {
      int i2 = 1 + static_cast<int>(rng.below(n));
      int i1 = 1 + static_cast<int>(rng.below(i2));
      SubspacePoint<double> outer = sample_uniform(amb, i2, rng);
      if (t % 2 == 1) {
        // structured: subsets of a standard representative's columns
        auto labels = enumerate_labels(p, q, i2);
        outer = act(random_group_element(h, 0.5, rng), standard_representative(labels[rng.below(labels.size())], amb));
        RealMatrix rb = outer.basis().leftCols(i1);
        ASSERT_NO_THROW(classify_flag(TwoStepFlagPoint<double>(SubspacePoint<double>(amb, rb), outer)));
        continue;
      }
      SubspacePoint<double> inner(amb, RealMatrix(outer.basis() * rng.gaussian(i2, i1)));
      ASSERT_NO_THROW(classify_flag(TwoStepFlagPoint<double>(inner, outer)));
    }
  }
}

TEST(SubspaceJson, RoundTrip) {
  auto amb = QuadraticSpace<double>::standard(2, 1);
  auto v = sample_uniform(amb, 2, 4);
  auto back = subspace_from_json<double>(subspace_to_json(v));
  EXPECT_TRUE(same_subspace(v, back));
  EXPECT_THROW(subspace_from_json<double>(Json{{"basis", 1}}), InputError);
}
