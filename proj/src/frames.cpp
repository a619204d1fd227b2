#include "frame_iterates/frames.hpp"

#include <algorithm>
#include <cmath>

#include "frame_iterates/errors.hpp"

namespace fi {

void FrameFamily::validate() const {
    if (vectors.cols() == 0 || vectors.rows() == 0)
        throw Error(ErrorKind::ShapeError, "family '" + label + "' has no vectors");
    if (k_max - k_min + 1 != static_cast<long>(vectors.cols()))
        throw Error(ErrorKind::ShapeError, "family '" + label + "': index window does not match vector count");
    if (k_min > 0 || k_max < 0)
        throw Error(ErrorKind::ShapeError, "family '" + label + "': window must contain index 0");
    require_finite(vectors, "family");
    if (vectors.cwiseAbs().maxCoeff() == 0.0)
        throw Error(ErrorKind::DegenerateFamily, "family '" + label + "' is identically zero");
}

FrameFamily make_family(std::string label, long k_min, CMatrix vectors) {
    FrameFamily fam;
    fam.label = std::move(label);
    fam.k_min = k_min;
    fam.k_max = k_min + static_cast<long>(vectors.cols()) - 1;
    fam.vectors = std::move(vectors);
    return fam;
}

SynthesisOperator synthesis(const FrameFamily& fam, const Tolerances& tol) {
    fam.validate();
    SynthesisOperator syn;
    syn.matrix = fam.vectors;
    syn.k_min = fam.k_min;
    syn.k_max = fam.k_max;
    syn.factor = svd(fam.vectors);
    syn.tau = rank_tolerance(fam.vectors.rows(), fam.vectors.cols(), syn.sigma_max(), tol.tau_scale);
    syn.rank = numerical_rank(syn.factor, fam.vectors.rows(), fam.vectors.cols(), tol.tau_scale);
    syn.reference_lower_bound = fam.reference_lower_bound;
    return syn;
}

FrameDiagnostics frame_bounds(const SynthesisOperator& syn) {
    FrameDiagnostics d;
    d.count = syn.matrix.cols();
    d.rank = syn.rank;
    d.excess = d.count - d.rank;
    d.linearly_independent = d.excess == 0;
    if (d.rank == 0) throw Error(ErrorKind::DegenerateFamily, "frame_bounds: family spans {0}");
    // Eigenvalues of S = UU* above the cutoff are the squared singular values of U.
    d.upper_bound_B = std::pow(syn.factor.singular_values(0), 2);
    d.lower_bound_A = std::pow(syn.factor.singular_values(d.rank - 1), 2);
    d.tight = d.upper_bound_B / d.lower_bound_A - 1.0 <= 1e-8;
    return d;
}

FrameDiagnostics frame_bounds(const FrameFamily& fam, const Tolerances& tol) {
    return frame_bounds(synthesis(fam, tol));
}

namespace {

// Rotate an orthonormal kernel basis so that its columns diagonalize the edge-mass form.
KernelBasis orient_by_edge_mass(CMatrix basis, int w) {
    KernelBasis ker;
    ker.edge_width = w;
    ker.dim = basis.cols();
    const Eigen::Index n = basis.rows();
    if (ker.dim == 0) {
        ker.basis = CMatrix::Zero(n, 0);
        ker.edge_mass = RVector::Zero(0);
        return ker;
    }
    const Eigen::Index width = std::min<Eigen::Index>(w, n);
    CMatrix edges(2 * width, ker.dim);
    edges.topRows(width) = basis.topRows(width);
    edges.bottomRows(width) = basis.bottomRows(width);
    const CMatrix form = edges.adjoint() * edges;
    const EighResult e = eigh(0.5 * (form + form.adjoint()));
    ker.basis = basis * e.eigenvectors;
    ker.edge_mass = e.eigenvalues.cwiseMax(0.0);
    return ker;
}

}  // namespace

KernelBasis kernel_basis(const SynthesisOperator& syn, const Tolerances& tol) {
    const Eigen::Index n = syn.matrix.cols();
    return orient_by_edge_mass(syn.factor.right_basis.rightCols(n - syn.rank), tol.edge_width);
}

KernelBasis diagnostic_kernel(const SynthesisOperator& syn, const Tolerances& tol) {
    if (!syn.reference_lower_bound) return kernel_basis(syn, tol);
    const Eigen::Index n = syn.matrix.cols();
    const double cutoff = std::sqrt(tol.near_kernel_theta * *syn.reference_lower_bound);
    Eigen::Index keep = 0;  // singular values strictly above both cutoffs
    for (Eigen::Index i = 0; i < syn.factor.singular_values.size(); ++i)
        if (syn.factor.singular_values(i) > std::max(cutoff, syn.tau)) ++keep;
    KernelBasis ker = orient_by_edge_mass(syn.factor.right_basis.rightCols(n - keep), tol.edge_width);
    ker.near = keep < syn.rank;
    return ker;
}

ShiftResult right_shift(const CVector& c) {
    ShiftResult r;
    const Eigen::Index n = c.size();
    r.shifted = CVector::Zero(n);
    if (n == 0) return r;
    r.shifted.tail(n - 1) = c.head(n - 1);
    r.dropped = std::abs(c(n - 1));
    return r;
}

ShiftResult left_shift(const CVector& c) {
    ShiftResult r;
    const Eigen::Index n = c.size();
    r.shifted = CVector::Zero(n);
    if (n == 0) return r;
    r.shifted.head(n - 1) = c.tail(n - 1);
    r.dropped = std::abs(c(0));
    return r;
}

CMatrix shift_matrix(Eigen::Index n, ShiftDirection dir) {
    CMatrix s = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (dir == ShiftDirection::Right)
            s(i + 1, i) = 1.0;
        else
            s(i, i + 1) = 1.0;
    }
    return s;
}

ShiftDefect shift_invariance_defect(const KernelBasis& ker, ShiftDirection dir, const Tolerances& tol) {
    ShiftDefect out;
    if (ker.dim == 0) return out;
    const Eigen::Index n = ker.basis.rows();
    Eigen::Index interior = 0;
    while (interior < ker.dim && ker.edge_mass(interior) <= tol.eta) ++interior;
    out.interior_dim = interior;
    out.quarantined = ker.dim - interior;
    out.trusted = interior > 0;
    const CMatrix probe = interior > 0 ? CMatrix(ker.basis.leftCols(interior)) : ker.basis;
    const CMatrix shifted = shift_matrix(n, dir) * probe;
    const CMatrix outside = shifted - ker.basis * (ker.basis.adjoint() * shifted);
    out.defect = opnorm(outside);
    return out;
}

CMatrix gram(const FrameFamily& fam) { return fam.vectors.adjoint() * fam.vectors; }

CMatrix frame_operator(const FrameFamily& fam) { return fam.vectors * fam.vectors.adjoint(); }

}  // namespace fi
