// Copyright 2026 The privkf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <random>

#include <gtest/gtest.h>

#include "privkf/errors.hpp"
#include "privkf/matlib.hpp"
#include "support.hpp"

namespace privkf::matlib {
namespace {

using testing::random_matrix;
using testing::random_spd;

// Rank-r matrix from a product of random factors.
Matrix random_rank(std::mt19937_64& g, int rows, int cols, int r) {
  return random_matrix(g, rows, r) * random_matrix(g, r, cols);
}

void expect_penrose(const Matrix& m, const Matrix& g) {
  const double tol = 1e-9 * std::max(1.0, max_abs(m)) * std::max(1.0, max_abs(g));
  EXPECT_LE(max_abs(m * g * m - m), tol);
  EXPECT_LE(max_abs(g * m * g - g), tol);
  EXPECT_LE(max_abs((m * g).transpose() - m * g), tol);
  EXPECT_LE(max_abs((g * m).transpose() - g * m), tol);
}

TEST(Pinv, IdentityAndDiagonal) {
  EXPECT_LE(max_abs(pinv(Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)), 0.0);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  Matrix want = Matrix::Zero(2, 2);
  want(0, 0) = 0.5;
  EXPECT_EQ(pinv(d), want);
}

TEST(Pinv, FullColumnRankIsLeftInverse) {
  std::mt19937_64 g(1);
  const Matrix m = random_matrix(g, 5, 3);
  EXPECT_LE(max_abs(pinv(m) * m - Matrix::Identity(3, 3)), 1e-9);
}

TEST(Pinv, PenroseConditionsOnMixedRank) {
  std::mt19937_64 g(2);
  std::uniform_int_distribution<int> dim(1, 7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int rows = dim(g);
    const int cols = dim(g);
    const int r = std::uniform_int_distribution<int>(0, std::min(rows, cols))(g);
    const Matrix m = r == 0 ? Matrix::Zero(rows, cols) : random_rank(g, rows, cols, r);
    const Matrix p = pinv(m);
    ASSERT_EQ(p.rows(), cols);
    expect_penrose(m, p);
    ASSERT_EQ(rank(m), r);
    // p * m is a projector; its null singular values carry two products of roundoff.
    ASSERT_EQ(rank(p * m, 1e-10), r);
  }
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(Matrix::Zero(3, 4)), 0);
  Matrix m(2, 2);
  m << 1, 2, 2, 4;
  EXPECT_EQ(rank(m, 1e-8), 1);
  EXPECT_EQ(rank(Matrix::Identity(5, 5)), 5);
}

TEST(Inverse, ExamplesAndResidual) {
  EXPECT_EQ(inv(Matrix::Identity(3, 3)), Matrix::Identity(3, 3));
  Matrix d(1, 1);
  d << 4;
  EXPECT_EQ(inv(d)(0, 0), 0.25);
  std::mt19937_64 g(3);
  const Matrix s = random_spd(g, 6);
  EXPECT_LE(max_abs(s * inv(s) - Matrix::Identity(6, 6)), 1e-9);
}

TEST(Inverse, SingularOrIllConditionedIsRejected) {
  Matrix m(2, 2);
  m << 1, 2, 2, 4;
  EXPECT_THROW(inv(m), SingularMatrixError);
  Matrix near = Matrix::Identity(2, 2);
  near(1, 1) = 1e-14;
  EXPECT_THROW(inv(near), SingularMatrixError);
  EXPECT_THROW(inv(Matrix::Zero(2, 3)), DimensionMismatchError);
}

TEST(Cholesky, FactorsSpdAndRejectsIndefinite) {
  EXPECT_EQ(cholesky(Matrix::Identity(3, 3)), Matrix::Identity(3, 3));
  std::mt19937_64 g(4);
  const Matrix s = random_spd(g, 5);
  const Matrix l = cholesky(s);
  EXPECT_LE(max_abs(l * l.transpose() - s), 1e-9);
  EXPECT_LE(max_abs(l.triangularView<Eigen::StrictlyUpper>().toDenseMatrix()), 0.0);
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = -1;
  EXPECT_THROW(cholesky(bad), NotPositiveDefiniteError);
}

TEST(BlockDiagonal, PlacesBlocksInOrder) {
  Matrix a(1, 1);
  a << 2;
  Matrix b(2, 2);
  b << 1, 3, 3, 9;
  const Matrix m = block_diagonal({a, b});
  ASSERT_EQ(m.rows(), 3);
  EXPECT_EQ(m(0, 0), 2);
  EXPECT_EQ(m(1, 2), 3);
  EXPECT_EQ(m(0, 1), 0);
  EXPECT_TRUE(is_diagonal(Matrix::Identity(3, 3)));
  EXPECT_FALSE(is_diagonal(m));
}

class Encrypted : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    CoinStream coins(41, CoinPurpose::kKeygen);
    keys_ = new phe::KeyPair(phe::keygen(phe::kTestKeyBits, coins));
  }
  static void TearDownTestSuite() { delete keys_; }
  static phe::KeyPair* keys_;
  const phe::PublicKey& pk() const { return keys_->pk; }
  const phe::PrivateKey& sk() const { return keys_->sk; }
  CoinStream coins{42, CoinPurpose::kEncryption};
};
phe::KeyPair* Encrypted::keys_ = nullptr;

TEST_F(Encrypted, IdentityAndZeroMaps) {
  Vector v(3);
  v << 1.5, -2.0, 0.25;
  const EncVector c = encrypt_vector(pk(), v, 40, coins);
  EXPECT_EQ(decrypt_vector(sk(), mat_enc_mul(pk(), Matrix::Identity(3, 3), c, 40)), v);
  EXPECT_EQ(decrypt_vector(sk(), mat_enc_mul(pk(), Matrix::Zero(2, 3), c, 40)),
            Vector::Zero(2));
}

TEST_F(Encrypted, MatVecMatchesPlaintext) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = random_matrix(g, 4, 4);
    const Vector v = random_matrix(g, 4, 1);
    const EncVector out = mat_enc_mul(pk(), a, encrypt_vector(pk(), v, 40, coins), 40);
    EXPECT_EQ(uniform_exponent(out), 80u);
    EXPECT_LE((decrypt_vector(sk(), out) - a * v).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST_F(Encrypted, VectorAddSub) {
  std::mt19937_64 g(6);
  const Vector a = random_matrix(g, 5, 1);
  const Vector b = random_matrix(g, 5, 1);
  const EncVector ca = encrypt_vector(pk(), a, 40, coins);
  const EncVector cb = mat_enc_mul(pk(), Matrix::Identity(5, 5), encrypt_vector(pk(), b, 40, coins), 40);
  EXPECT_LE((decrypt_vector(sk(), enc_vec_add(pk(), ca, cb)) - (a + b)).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_LE((decrypt_vector(sk(), enc_vec_sub(pk(), ca, cb)) - (a - b)).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_EQ(decrypt_vector(sk(), enc_vec_sub(pk(), ca, ca)), Vector::Zero(5));
  const EncVector zero = encrypt_vector(pk(), Vector::Zero(5), 40, coins);
  EXPECT_EQ(decrypt_vector(sk(), enc_vec_add(pk(), zero, ca)), decrypt_vector(sk(), ca));
}

TEST_F(Encrypted, DimensionMismatches) {
  const EncVector c = encrypt_vector(pk(), Vector::Ones(3), 40, coins);
  const EncVector d = encrypt_vector(pk(), Vector::Ones(2), 40, coins);
  EXPECT_THROW(mat_enc_mul(pk(), Matrix::Identity(2, 2), c, 40), DimensionMismatchError);
  EXPECT_THROW(enc_vec_add(pk(), c, d), DimensionMismatchError);
}

}  // namespace
}  // namespace privkf::matlib
