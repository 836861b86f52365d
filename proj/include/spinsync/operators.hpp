// operators.hpp — Pauli algebra, eigendecompositions, partial trace, entropy
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace spinsync {

using cxd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using Vec16 = Eigen::Vector<cxd, 16>;
using Mat16 = Eigen::Matrix<cxd, 16, 16>;

inline constexpr cxd kI{0.0, 1.0};

enum class Axis { x, y, z };

inline Mat2 identity2() { return Mat2::Identity(); }

inline Mat2 sigma(Axis a) {
  Mat2 m;
  switch (a) {
    case Axis::x: m << 0, 1, 1, 0; break;
    case Axis::y: m << 0, -kI, kI, 0; break;
    case Axis::z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Kronecker product, row-major block convention: (A ⊗ B)[ia*nb+ib, ja*nb+jb].
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Single-site Pauli embedded in the two-spin space. site is 1 or 2.
inline Mat4 pauli(Axis a, int site) {
  if (site != 1 && site != 2) throw std::invalid_argument("pauli: site must be 1 or 2");
  const Mat2 s = sigma(a), id = identity2();
  return site == 1 ? Mat4(kron(s, id)) : Mat4(kron(id, s));
}

// Row-major flattening (a,b) -> 4a+b, matching the generator index layout.
inline Vec16 flatten(const Mat4& m) {
  Vec16 v;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) v[4 * a + b] = m(a, b);
  return v;
}

inline Mat4 unflatten(const Vec16& v) {
  Mat4 m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = v[4 * a + b];
  return m;
}

struct HermitianEig {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns, orthonormal
};

// Eigendecomposition of a Hermitian matrix. Rejects input whose
// anti-Hermitian part exceeds tol in max-norm.
inline HermitianEig hermitian_eig(const Eigen::MatrixXcd& m, double tol = 1e-9) {
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol)
    throw std::invalid_argument("hermitian_eig: matrix not Hermitian, deviation " +
                                std::to_string(dev));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

struct GeneralEig {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd right;  // columns r_k
  Eigen::MatrixXcd left;   // rows l_k^T with left * right = I
  bool defective{false};   // right-vector matrix numerically rank deficient
};

// Eigendecomposition of a general complex matrix with biorthogonal left
// vectors. Near-defective input (condition of the eigenvector matrix beyond
// rcond_limit) is flagged rather than inverted.
inline GeneralEig general_eig(const Eigen::MatrixXcd& m, double rcond_limit = 1e-10) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("general_eig: solver failed");
  GeneralEig out;
  out.values = es.eigenvalues();
  out.right = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.right);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) < rcond_limit * sv(0)) {
    out.defective = true;
    return out;
  }
  out.left = out.right.inverse();
  return out;
}

// Trace out one spin of a two-spin state. keep=1 keeps the first site.
inline Mat2 partial_trace(const Mat4& rho, int keep) {
  if (keep != 1 && keep != 2) throw std::invalid_argument("partial_trace: keep must be 1 or 2");
  Mat2 out = Mat2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        out(i, j) += keep == 1 ? rho(2 * i + k, 2 * j + k) : rho(2 * k + i, 2 * k + j);
  return out;
}

// Von Neumann entropy in bits. Eigenvalues in (-clamp, 0) are treated as 0;
// anything more negative is a contract violation.
inline double von_neumann_entropy(const Eigen::MatrixXcd& rho, double clamp = 1e-9) {
  const auto eig = hermitian_eig(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    double p = eig.values(i);
    if (p < -clamp)
      throw std::invalid_argument("von_neumann_entropy: eigenvalue " + std::to_string(p) +
                                  " below -" + std::to_string(clamp));
    if (p <= 1e-18) continue;
    s -= p * std::log2(p);
  }
  return s;
}

// Binary entropy in bits, H(p) = -p log2 p - (1-p) log2 (1-p).
inline double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0,1]");
  double s = 0.0;
  if (p > 1e-18) s -= p * std::log2(p);
  if (1.0 - p > 1e-18) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

inline double min_eigenvalue(const Mat4& rho) {
  const Mat4 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> es(herm);
  return es.eigenvalues()(0);
}

// Validate a density matrix: Hermitian and unit trace within tol.
inline void check_density_matrix(const Mat4& rho, double tol = 1e-10) {
  const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol)
    throw std::invalid_argument("density matrix not Hermitian, deviation " +
                                std::to_string(herm_dev));
  const double tr_dev = std::abs(rho.trace() - cxd{1.0, 0.0});
  if (tr_dev > tol)
    throw std::invalid_argument("density matrix trace deviates from 1 by " +
                                std::to_string(tr_dev));
}

}  // namespace spinsync
