#include "frame_iterates/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

#include "frame_iterates/errors.hpp"

namespace fi {

namespace {

using Jacobi = Eigen::JacobiSVD<CMatrix, Eigen::ColPivHouseholderQRPreconditioner>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text) {
    if (text.empty() || text == "+") return 1.0;
    if (text == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad number '" + text + "'");
    }
    if (used != text.size()) throw Error(ErrorKind::ParseError, "bad number '" + text + "'");
    return v;
}

}  // namespace

void require_finite(const CMatrix& a, const char* where) {
    if (a.size() == 0) throw Error(ErrorKind::InvalidMatrix, std::string(where) + ": empty matrix");
    if (!a.allFinite()) throw Error(ErrorKind::InvalidMatrix, std::string(where) + ": non-finite entry");
}

SvdResult svd(const CMatrix& a) {
    require_finite(a, "svd");
    Jacobi j(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {j.singularValues(), j.matrixU(), j.matrixV()};
}

RVector singular_values(const CMatrix& a) {
    require_finite(a, "singular_values");
    Jacobi j(a);
    return j.singularValues();
}

EighResult eigh(const CMatrix& a) {
    require_finite(a, "eigh");
    if (a.rows() != a.cols()) throw Error(ErrorKind::ShapeError, "eigh: matrix is not square");
    const double scale = std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error(ErrorKind::NotHermitian, "eigh: input deviates from its adjoint");
    CMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::InvalidMatrix, "eigh: no convergence");
    return {es.eigenvalues(), es.eigenvectors()};
}

double rank_tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max, double tau_scale) {
    return tau_scale * static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() *
           sigma_max;
}

double rank_tolerance(const CMatrix& a, double tau_scale) {
    return rank_tolerance(a.rows(), a.cols(), opnorm(a), tau_scale);
}

Eigen::Index numerical_rank(const SvdResult& s, Eigen::Index rows, Eigen::Index cols, double tau_scale) {
    if (s.singular_values.size() == 0) return 0;
    const double tau = rank_tolerance(rows, cols, s.singular_values(0), tau_scale);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.singular_values.size(); ++i)
        if (s.singular_values(i) > tau) ++r;
    return r;
}

CMatrix pinv(const CMatrix& a, double tau_scale) {
    const SvdResult s = svd(a);
    const Eigen::Index r = numerical_rank(s, a.rows(), a.cols(), tau_scale);
    CMatrix out = CMatrix::Zero(a.cols(), a.rows());
    for (Eigen::Index i = 0; i < r; ++i)
        out += s.right_basis.col(i) * (1.0 / s.singular_values(i)) * s.left_basis.col(i).adjoint();
    return out;
}

CMatrix lstsq(const CMatrix& a, const CMatrix& b, double tau_scale) {
    if (a.rows() != b.rows())
        throw Error(ErrorKind::ShapeError, "lstsq: a has " + std::to_string(a.rows()) + " rows, b has " +
                                               std::to_string(b.rows()));
    require_finite(b, "lstsq");
    const SvdResult s = svd(a);
    const Eigen::Index r = numerical_rank(s, a.rows(), a.cols(), tau_scale);
    CMatrix coeff = s.left_basis.leftCols(r).adjoint() * b;
    for (Eigen::Index i = 0; i < r; ++i) coeff.row(i) /= s.singular_values(i);
    return s.right_basis.leftCols(r) * coeff;
}

double opnorm(const CMatrix& a) {
    const RVector s = singular_values(a);
    return s.size() ? s(0) : 0.0;
}

CMatrix range_basis(const CMatrix& a, double tau_scale) {
    const SvdResult s = svd(a);
    return s.left_basis.leftCols(numerical_rank(s, a.rows(), a.cols(), tau_scale));
}

CMatrix null_basis(const CMatrix& a, double tau_scale) {
    const SvdResult s = svd(a);
    const Eigen::Index r = numerical_rank(s, a.rows(), a.cols(), tau_scale);
    return s.right_basis.rightCols(a.cols() - r);
}

CMatrix reconstruct(const SvdResult& s, Eigen::Index rows, Eigen::Index cols) {
    const Eigen::Index k = s.singular_values.size();
    if (s.left_basis.rows() != rows || s.right_basis.rows() != cols)
        throw Error(ErrorKind::ShapeError, "reconstruct: factor shapes do not match");
    return s.left_basis.leftCols(k) * s.singular_values.cast<Complex>().asDiagonal() *
           s.right_basis.leftCols(k).adjoint();
}

double max_principal_angle(const CMatrix& qa, const CMatrix& qb) {
    if (qa.cols() != qb.cols()) return M_PI / 2;
    if (qa.cols() == 0) return 0.0;
    // Sine of the largest angle is the norm of the part of qb outside range(qa); acos of the
    // cosines would lose all accuracy for nearly equal subspaces.
    const CMatrix resid = qb - qa * (qa.adjoint() * qb);
    return std::asin(std::min(1.0, opnorm(resid)));
}

std::string format_complex(Complex z) {
    char buf[64];
    const double im = z.imag();
    std::snprintf(buf, sizeof buf, "%.17g%s%.17gi", z.real(), std::signbit(im) ? "-" : "+", std::fabs(im));
    return buf;
}

Complex parse_complex(const std::string& raw) {
    std::string text = trim(raw);
    text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
    if (text.empty()) throw Error(ErrorKind::ParseError, "empty complex entry");
    if (text.back() != 'i' && text.back() != 'j') return {parse_real(text), 0.0};
    text.pop_back();
    // The separating sign is the last '+'/'-' that is not the leading sign or part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t p = text.size(); p-- > 1;) {
        if ((text[p] == '+' || text[p] == '-') && text[p - 1] != 'e' && text[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, parse_real(text)};
    return {parse_real(text.substr(0, split)), parse_real(text.substr(split))};
}

CMatrix read_csv(std::istream& in) {
    std::vector<std::vector<Complex>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<Complex> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(parse_complex(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error(ErrorKind::ShapeError, "read_csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::InvalidMatrix, "read_csv: no rows");
    CMatrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rows[i][j];
    require_finite(a, "read_csv");
    return a;
}

void write_csv(std::ostream& out, const CMatrix& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (j) out << ',';
            out << format_complex(a(i, j));
        }
        out << '\n';
    }
}

}  // namespace fi
