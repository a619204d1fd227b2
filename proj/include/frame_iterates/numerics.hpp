#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace fi {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct SvdResult {
    RVector singular_values;  // descending, length min(rows, cols)
    CMatrix left_basis;       // rows x rows
    CMatrix right_basis;      // cols x cols
};

struct EighResult {
    RVector eigenvalues;  // ascending
    CMatrix eigenvectors;
};

// Throws InvalidMatrix on empty input or NaN/Inf entries.
void require_finite(const CMatrix& a, const char* where);

// Full SVD. Deterministic one-sided Jacobi with a pivoted QR preconditioner.
SvdResult svd(const CMatrix& a);

// Singular values only, descending.
RVector singular_values(const CMatrix& a);

// Hermitian eigendecomposition; rejects inputs that are not Hermitian within 1e-10 relative.
EighResult eigh(const CMatrix& a);

// Spectral cutoff max(rows, cols) * eps * sigma_max shared by every rank decision.
// tau_scale multiplies the cutoff; 1 everywhere unless a run overrides it.
double rank_tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max, double tau_scale = 1.0);
double rank_tolerance(const CMatrix& a, double tau_scale = 1.0);

// Number of singular values above the rank tolerance.
Eigen::Index numerical_rank(const SvdResult& s, Eigen::Index rows, Eigen::Index cols, double tau_scale = 1.0);

// Minimum-norm least-squares solution of a x = b with the shared rank tolerance.
CMatrix lstsq(const CMatrix& a, const CMatrix& b, double tau_scale = 1.0);

// Moore-Penrose pseudoinverse with the shared rank tolerance.
CMatrix pinv(const CMatrix& a, double tau_scale = 1.0);

// Largest singular value; zero for an all-zero matrix.
double opnorm(const CMatrix& a);

// Orthonormal basis of the column space (left singular vectors above tolerance).
CMatrix range_basis(const CMatrix& a, double tau_scale = 1.0);

// Orthonormal basis of the null space (right singular vectors at or below tolerance).
CMatrix null_basis(const CMatrix& a, double tau_scale = 1.0);

// Reconstruct U diag(s) V* from an SVD.
CMatrix reconstruct(const SvdResult& s, Eigen::Index rows, Eigen::Index cols);

// Cosines of principal angles are the singular values of Qa* Qb; returns the largest angle.
double max_principal_angle(const CMatrix& qa, const CMatrix& qb);

// CSV with one matrix row per line, entries written as "a+bi".
std::string format_complex(Complex z);
Complex parse_complex(const std::string& text);
CMatrix read_csv(std::istream& in);
void write_csv(std::ostream& out, const CMatrix& a);

}  // namespace fi
