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
#pragma once

// Dense real linear algebra on Eigen types, plus plaintext-matrix by
// encrypted-vector products.

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "privkf/coins.hpp"
#include "privkf/encoding.hpp"
#include "privkf/phe.hpp"

namespace privkf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using EncVector = std::vector<Ciphertext>;

namespace matlib {

inline constexpr double kMaxConditionNumber = 1e12;

// Default relative cutoff: machine epsilon times the larger dimension.
double default_rtol(const Matrix& m);

// Moore-Penrose pseudoinverse. Singular values below rtol * sigma_max are
// treated as zero. Diagonal inputs skip the SVD.
Matrix pinv(const Matrix& m, std::optional<double> rtol = std::nullopt);

// Inverse of a square, well-conditioned matrix.
Matrix inv(const Matrix& m);

int rank(const Matrix& m, std::optional<double> rtol = std::nullopt);

// Lower-triangular L with L L^T = s. s must be symmetric positive-definite.
Matrix cholesky(const Matrix& s);

Matrix symmetrize(const Matrix& m);
double min_eigenvalue(const Matrix& symmetric);
bool is_diagonal(const Matrix& m);
bool is_symmetric(const Matrix& m, double tol = 1e-9);
bool is_spd(const Matrix& m);
double max_abs(const Matrix& m);

Matrix block_diagonal(const std::vector<Matrix>& blocks);

EncVector encrypt_vector(const phe::PublicKey& pk, const Vector& x, unsigned frac_bits,
                         CoinStream& coins, std::vector<mpz_class>* drawn = nullptr);
Vector decrypt_vector(const phe::PrivateKey& sk, const EncVector& v);

// Common exponent of v; raises DimensionMismatchError if v is mixed.
unsigned uniform_exponent(const EncVector& v);
EncVector align_vector(const phe::PublicKey& pk, const EncVector& v, unsigned exponent);

// a * v with every entry of a encoded at frac_bits. Zero entries are skipped.
EncVector mat_enc_mul(const phe::PublicKey& pk, const Matrix& a, const EncVector& v,
                      unsigned frac_bits);

EncVector enc_vec_add(const phe::PublicKey& pk, const EncVector& a, const EncVector& b);
EncVector enc_vec_sub(const phe::PublicKey& pk, const EncVector& a, const EncVector& b);

}  // namespace matlib
}  // namespace privkf
