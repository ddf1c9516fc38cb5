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
#include "privkf/matlib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "privkf/errors.hpp"

namespace privkf::matlib {

namespace {

std::string dims(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite entries");
}

}  // namespace

double default_rtol(const Matrix& m) {
  return std::numeric_limits<double>::epsilon() *
         static_cast<double>(std::max(m.rows(), m.cols()));
}

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

Matrix pinv(const Matrix& m, std::optional<double> rtol) {
  require_finite(m, "pinv");
  const double tol = rtol.value_or(default_rtol(m));
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  if (is_diagonal(m)) {
    const Eigen::Index k = std::min(m.rows(), m.cols());
    double sigma_max = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) sigma_max = std::max(sigma_max, std::abs(m(i, i)));
    Matrix out = Matrix::Zero(m.cols(), m.rows());
    for (Eigen::Index i = 0; i < k; ++i) {
      if (std::abs(m(i, i)) > tol * sigma_max) out(i, i) = 1.0 / m(i, i);
    }
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
  const auto& s = svd.singularValues();
  const double cutoff = tol * (s.size() > 0 ? s(0) : 0.0);
  Vector s_inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) s_inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix inv(const Matrix& m) {
  require_finite(m, "inv");
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatchError("inverse of non-square matrix " + dims(m));
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= 0.0 || s(0) / smin > kMaxConditionNumber) {
    throw SingularMatrixError("matrix is singular or ill-conditioned (" + dims(m) + ")");
  }
  return m.fullPivLu().inverse();
}

int rank(const Matrix& m, std::optional<double> rtol) {
  require_finite(m, "rank");
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = rtol.value_or(default_rtol(m)) * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > cutoff ? 1 : 0;
  return r;
}

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, max_abs(m));
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix cholesky(const Matrix& s) {
  require_finite(s, "cholesky");
  if (!is_symmetric(s)) throw NotPositiveDefiniteError("matrix is not symmetric");
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("matrix is not positive-definite");
  }
  return llt.matrixL();
}

bool is_spd(const Matrix& m) {
  if (m.size() == 0 || !m.allFinite() || !is_symmetric(m)) return false;
  Eigen::LLT<Matrix> llt(m);
  return llt.info() == Eigen::Success;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double min_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

EncVector encrypt_vector(const phe::PublicKey& pk, const Vector& x, unsigned frac_bits,
                         CoinStream& coins, std::vector<mpz_class>* drawn) {
  EncVector out;
  out.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const mpz_class r = phe::draw_coin(pk, coins);
    if (drawn != nullptr) drawn->push_back(r);
    out.push_back(encrypt_encoded(pk, encode(x(i), frac_bits, pk), r));
  }
  return out;
}

Vector decrypt_vector(const phe::PrivateKey& sk, const EncVector& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = decrypt_value(sk, v[i]);
  }
  return out;
}

unsigned uniform_exponent(const EncVector& v) {
  if (v.empty()) return 0;
  const unsigned e = v.front().exponent;
  for (const auto& c : v) {
    if (c.exponent != e) throw DimensionMismatchError("encrypted vector has mixed exponents");
  }
  return e;
}

EncVector align_vector(const phe::PublicKey& pk, const EncVector& v, unsigned exponent) {
  EncVector out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(align(pk, c, exponent));
  return out;
}

EncVector mat_enc_mul(const phe::PublicKey& pk, const Matrix& a, const EncVector& v,
                      unsigned frac_bits) {
  if (static_cast<std::size_t>(a.cols()) != v.size()) {
    throw DimensionMismatchError("matrix " + dims(a) + " times vector of length " +
                                 std::to_string(v.size()));
  }
  unsigned e_v = 0;
  for (const auto& c : v) e_v = std::max(e_v, c.exponent);
  const EncVector aligned = align_vector(pk, v, e_v);
  const unsigned e_out = e_v + frac_bits;
  if (e_out > exponent_budget(pk)) {
    throw ExponentBudgetExceeded("product exponent " + std::to_string(e_out) +
                                 " exceeds budget " +
                                 std::to_string(exponent_budget(pk)));
  }
  EncVector out;
  out.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    std::optional<phe::RawCiphertext> acc;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0.0) continue;
      const Ciphertext term =
          enc_cmul(pk, encode(a(i, j), frac_bits, pk), aligned[static_cast<std::size_t>(j)]);
      acc = acc ? phe::add(pk, *acc, term.raw) : term.raw;
    }
    out.push_back(Ciphertext{acc ? *acc : phe::trivial_zero(pk), e_out});
  }
  return out;
}

namespace {

template <class Op>
EncVector entrywise(const phe::PublicKey& pk, const EncVector& a, const EncVector& b,
                    Op op) {
  if (a.size() != b.size()) {
    throw DimensionMismatchError("encrypted vectors of length " + std::to_string(a.size()) +
                                 " and " + std::to_string(b.size()));
  }
  unsigned e = 0;
  for (const auto& c : a) e = std::max(e, c.exponent);
  for (const auto& c : b) e = std::max(e, c.exponent);
  EncVector out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(op(pk, align(pk, a[i], e), align(pk, b[i], e)));
  }
  return out;
}

}  // namespace

EncVector enc_vec_add(const phe::PublicKey& pk, const EncVector& a, const EncVector& b) {
  return entrywise(pk, a, b, enc_add);
}

EncVector enc_vec_sub(const phe::PublicKey& pk, const EncVector& a, const EncVector& b) {
  return entrywise(pk, a, b, enc_sub);
}

}  // namespace privkf::matlib
