#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "banditlab/linalg.hpp"
#include "banditlab/rng.hpp"

using namespace banditlab;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

// Classical Gram-Schmidt, kept deliberately naive as an independent check.
std::vector<Vec> gram_schmidt(const std::vector<Vec>& in) {
  std::vector<Vec> out;
  for (Vec v : in) {
    for (const Vec& q : out) v -= q.dot(v) * q;
    if (v.norm() > 1e-9) out.push_back(v / v.norm());
  }
  return out;
}

Mat random_spd(int d, Rng& rng) {
  Mat a(d, d);
  for (int i = 0; i < d; ++i) a.col(i) = gaussian_vector(d, rng);
  return a * a.transpose() + Mat::Identity(d, d);
}

}  // namespace

TEST(OrthBasis, DuplicateVectorHasRankOne) {
  const Mat u = orth_basis<double>({v3(1, 0, 0), v3(1, 0, 0)});
  ASSERT_EQ(u.cols(), 1);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
}

TEST(OrthBasis, NearlyCollinearPairSpansPlane) {
  const std::vector<Vec> vs{v3(1, 0, 0), v3(1, 0.1, 0)};
  const Mat u = orth_basis(vs);
  ASSERT_EQ(u.cols(), 2);
  EXPECT_LT((u.transpose() * u - Mat::Identity(2, 2)).norm(), 1e-12);
  Mat q(3, 2);
  const auto gs = gram_schmidt(vs);
  q << gs[0], gs[1];
  EXPECT_LT((u * u.transpose() - q * q.transpose()).norm(), 1e-12);
}

TEST(OrthBasis, EmptyInputGivesEmptyBasis) {
  EXPECT_EQ(orth_basis(std::vector<Vec>{}).size(), 0);
}

TEST(ProjOrthComplement, RemarkValues) {
  EXPECT_LT((proj_orth_complement<double>({v3(1, 0, 0)}, v3(1, 1, 1)) - v3(0, 1, 1)).norm(), 1e-12);
  EXPECT_LT((proj_orth_complement<double>({v3(1, 0, 0), v3(1, 0.1, 0)}, v3(1, 1, 1)) - v3(0, 0, 1)).norm(), 1e-12);
}

TEST(ProjOrthComplement, EmptySetIsIdentity) {
  const Vec x = v3(0.3, -2, 5);
  EXPECT_EQ(proj_orth_complement<double>({}, x), x);
}

TEST(ProjOrthComplement, DimensionMismatchThrows) {
  EXPECT_THROW(proj_orth_complement<double>({Vec::Ones(2)}, v3(1, 1, 1)), InvalidInput);
}

TEST(ProjOrthComplement, ProjectorProperties) {
  Rng rng = make_stream(1, 1);
  const std::vector<Vec> span{gaussian_vector(6, rng), gaussian_vector(6, rng), gaussian_vector(6, rng)};
  for (int k = 0; k < 100; ++k) {
    const Vec x = gaussian_vector(6, rng), y = gaussian_vector(6, rng);
    const Vec px = proj_orth_complement(span, x);
    EXPECT_LE((proj_orth_complement(span, px) - px).norm(), 1e-9 * x.norm());
    EXPECT_LE(std::abs(px.dot(y) - x.dot(proj_orth_complement(span, y))), 1e-9);
  }
  for (const Vec& t : span) EXPECT_LE(proj_orth_complement(span, t).norm(), 1e-9);
}

TEST(MinEigenvalue, Examples) {
  EXPECT_NEAR(min_eigenvalue(Mat(Mat::Identity(3, 3))), 1.0, 1e-12);
  EXPECT_NEAR(min_eigenvalue(Mat(v3(2, 0.5, 0).asDiagonal())), 0.0, 1e-12);
  // Σθθᵀ for (1,0),(1,1) is [[2,1],[1,1]]: λ = (3 − √5)/2
  Mat m(2, 2);
  m << 2, 1, 1, 1;
  EXPECT_NEAR(min_eigenvalue(m), (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);
}

TEST(MinEigenvalue, AsymmetricInputRejected) {
  Mat m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(min_eigenvalue(m), InvalidInput);
}

TEST(MinEigenvalue, WeylPerturbation) {
  Rng rng = make_stream(2, 2);
  for (int k = 0; k < 50; ++k) {
    Mat p(4, 4), e(4, 4);
    for (int i = 0; i < 4; ++i) {
      p.col(i) = gaussian_vector(4, rng);
      e.col(i) = 0.1 * gaussian_vector(4, rng);
    }
    p = (p + p.transpose()).eval();
    e = (e + e.transpose()).eval();
    EXPECT_GE(min_eigenvalue(Mat(p + e)), min_eigenvalue(p) - sym_spectral_norm(e) - 1e-9);
  }
}

TEST(WeightedNorm, Examples) {
  EXPECT_DOUBLE_EQ(weighted_norm(Vec(Vec::Unit(3, 0)), Mat(Mat::Identity(3, 3))), 1.0);
  EXPECT_DOUBLE_EQ(weighted_norm(Vec(Vec::Zero(3)), Mat(Mat::Identity(3, 3))), 0.0);
  Vec x(2);
  x << 1, 1;
  Mat m = Mat::Zero(2, 2);
  m.diagonal() << 4, 9;
  EXPECT_NEAR(weighted_norm(x, m), std::sqrt(13.0), 1e-12);
}

TEST(SpdSolve, Examples) {
  Vec b(2);
  b << 2, 4;
  EXPECT_EQ(spd_solve(Mat(Mat::Identity(2, 2)), b), b);
  Vec want(2);
  want << 1, 2;
  EXPECT_LT((spd_solve(Mat(2 * Mat::Identity(2, 2)), b) - want).norm(), 1e-14);

  Rng rng = make_stream(3, 3);
  const Mat m = random_spd(5, rng);
  const Vec rhs = gaussian_vector(5, rng);
  EXPECT_LT((m * spd_solve(m, rhs) - rhs).norm(), 1e-10);
}

TEST(SpdSolve, IndefiniteThrows) {
  Mat m = Mat::Identity(2, 2);
  m(1, 1) = -1;
  EXPECT_THROW(spd_solve(m, Vec(Vec::Ones(2))), NumericalError);
}

TEST(ShermanMorrison, Examples) {
  const Mat upd = sherman_morrison_update(Mat(Mat::Identity(3, 3)), Vec(Vec::Unit(3, 0)));
  Mat want = Mat::Identity(3, 3);
  want(0, 0) = 0.5;
  EXPECT_LT((upd - want).norm(), 1e-15);

  Rng rng = make_stream(4, 4);
  const Mat m = random_spd(4, rng);
  const Mat inv = m.inverse();
  EXPECT_LT((sherman_morrison_update(inv, Vec(Vec::Zero(4))) - inv).norm(), 1e-15);

  const Vec a = gaussian_vector(4, rng);
  const Mat next = sherman_morrison_update(inv, a);
  const Mat m2 = m + a * a.transpose();
  for (int j = 0; j < 4; ++j) {
    const Vec e = Vec::Unit(4, j);
    EXPECT_LT((next * e - spd_solve(m2, e)).norm(), 1e-10);
  }
}

TEST(ShermanMorrison, ChainOfFiftyMatchesOneShot) {
  Rng rng = make_stream(5, 5);
  Mat m = Mat::Identity(5, 5);
  Mat inv = m;
  for (int k = 0; k < 50; ++k) {
    const Vec a = gaussian_vector(5, rng);
    m += a * a.transpose();
    inv = sherman_morrison_update(inv, a);
  }
  const Mat oneshot = m.inverse();
  EXPECT_LE((inv - oneshot).norm() / oneshot.norm(), 1e-6);
  EXPECT_TRUE(all_finite(inv));
}
