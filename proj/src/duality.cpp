#include "frame_iterates/duality.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "frame_iterates/errors.hpp"

namespace fi {

namespace {

// T* expressed in coordinates of an orthonormal basis Q of span(fam), with a cached pseudoinverse
// standing in for the repeated solve against T*.
struct AdjointOnSpan {
    CMatrix q;
    CMatrix adj;      // Q* T* Q
    CMatrix adj_inv;  // pinv(Q* T* Q)

    AdjointOnSpan(const FrameFamily& fam, const IteratedRep& rep, const Tolerances& tol)
        : q(range_basis(fam.vectors, tol.tau_scale)) {
        adj = q.adjoint() * rep.op_matrix.adjoint() * q;
        adj_inv = pinv(adj, tol.tau_scale);
    }

    // (T*)^{-k} v for v given in span coordinates.
    CVector power(CVector v, long k) const {
        for (long i = 0; i < k; ++i) v = adj_inv * v;
        for (long i = 0; i > k; --i) v = adj * v;
        return v;
    }

    // Columns (T*)^{-k} v for k_min <= k <= k_max, walking outward from k = 0.
    CMatrix orbit(const CVector& v, long k_min, long k_max) const {
        CMatrix out(q.cols(), k_max - k_min + 1);
        out.col(-k_min) = v;
        for (long k = 1; k <= k_max; ++k) out.col(k - k_min) = adj_inv * out.col(k - 1 - k_min);
        for (long k = -1; k >= k_min; --k) out.col(k - k_min) = adj * out.col(k + 1 - k_min);
        return out;
    }
};

CVector gaussian_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

double max_relative_column_gap(const CMatrix& a, const CMatrix& b, double scale) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < a.cols(); ++k) worst = std::max(worst, (a.col(k) - b.col(k)).norm());
    return scale > 0.0 ? worst / scale : worst;
}

void require_same_window(const FrameFamily& f, const FrameFamily& g) {
    if (f.k_min != g.k_min || f.k_max != g.k_max || f.ambient_dim() != g.ambient_dim())
        throw Error(ErrorKind::ShapeError, "dual candidate must share the window and ambient dimension");
}

}  // namespace

CVector random_span_vector(const FrameFamily& fam, std::uint64_t seed) {
    const CMatrix q = range_basis(fam.vectors);
    std::mt19937_64 rng(seed);
    CVector v = q * gaussian_vector(q.cols(), rng);
    return v / v.norm();
}

double reconstruction_residual(const FrameFamily& f, const FrameFamily& g, std::uint64_t seed) {
    require_same_window(f, g);
    const CMatrix q = range_basis(f.vectors);
    std::mt19937_64 rng(seed);
    CMatrix probes(q.rows(), q.cols() + 10);
    probes.leftCols(q.cols()) = q;
    for (Eigen::Index i = 0; i < 10; ++i) {
        CVector v = q * gaussian_vector(q.cols(), rng);
        probes.col(q.cols() + i) = v / v.norm();
    }
    const CMatrix rebuilt = f.vectors * (g.vectors.adjoint() * probes);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < probes.cols(); ++i)
        worst = std::max(worst, (rebuilt.col(i) - probes.col(i)).norm() / probes.col(i).norm());
    return worst;
}

DualFamily canonical_dual(const FrameFamily& fam, const IteratedRep& rep, const Tolerances& tol) {
    const FrameDiagnostics diag = frame_bounds(fam, tol);
    const double ratio = diag.upper_bound_B / diag.lower_bound_A;
    if (ratio > 1e12) {
        std::ostringstream msg;
        msg << "frame operator condition B/A = " << ratio << " exceeds 1e12";
        throw Error(ErrorKind::IllConditioned, msg.str());
    }
    DualFamily dual;
    dual.provenance = "canonical";
    dual.family = fam;
    dual.family.label = fam.label + "-canonical-dual";
    dual.family.reference_lower_bound.reset();
    // Column k of (U^+)* is S^{-1} f_k.
    dual.family.vectors = pinv(fam.vectors, tol.tau_scale).adjoint();
    dual.reconstruction_residual = reconstruction_residual(fam, dual.family);
    if (rep.invertible) {
        const AdjointOnSpan t(fam, rep, tol);
        const CMatrix coords = t.q.adjoint() * dual.family.vectors;
        const CVector g0 = coords.col(-fam.k_min);
        dual.iterated_form_residual =
            max_relative_column_gap(coords, t.orbit(g0, fam.k_min, fam.k_max), g0.norm());
    }
    return dual;
}

DualFamily dual_from_h0(const FrameFamily& fam, const IteratedRep& rep, const CVector& h0, const Tolerances& tol) {
    if (!rep.invertible)
        throw Error(ErrorKind::NotApplicable, "dual_from_h0 needs T invertible on the span of '" + fam.label + "'");
    if (h0.size() != fam.ambient_dim()) throw Error(ErrorKind::ShapeError, "h0 length differs from ambient dimension");
    require_finite(h0, "h0");
    const AdjointOnSpan t(fam, rep, tol);

    DualFamily dual;
    dual.provenance = "h0_formula";
    const CVector h0_coords = t.q.adjoint() * h0;
    dual.h0 = t.q * h0_coords;
    dual.h0_projected = (h0 - dual.h0).norm() > 1e-12 * std::max(1.0, h0.norm());

    const CMatrix canonical = pinv(fam.vectors, tol.tau_scale).adjoint();
    const CVector sf0 = t.q.adjoint() * canonical.col(-fam.k_min);
    const CMatrix f_coords = t.q.adjoint() * fam.vectors;
    const CMatrix h_orbit = t.orbit(h0_coords, fam.k_min, fam.k_max);
    // <S^{-1} f_0, f_j> = f_j* S^{-1} f_0, with f_j = T^j f_0 over the window.
    const CVector weights = f_coords.adjoint() * sf0;
    const CVector g0 = sf0 + h0_coords - h_orbit * weights;

    const CMatrix g_coords = t.orbit(g0, fam.k_min, fam.k_max);
    dual.family = make_family(fam.label + "-h0-dual", fam.k_min, t.q * g_coords);
    dual.reconstruction_residual = reconstruction_residual(fam, dual.family);

    // Consistency of the orbit: T* g_{k+1} = g_k for every adjacent pair.
    double worst = 0.0;
    for (Eigen::Index j = 0; j + 1 < g_coords.cols(); ++j)
        worst = std::max(worst, (t.adj * g_coords.col(j + 1) - g_coords.col(j)).norm());
    dual.iterated_form_residual = g0.norm() > 0.0 ? worst / g0.norm() : worst;
    return dual;
}

DualFamily user_dual(const FrameFamily& fam, const FrameFamily& candidate) {
    candidate.validate();
    DualFamily dual;
    dual.provenance = "user";
    dual.family = candidate;
    dual.reconstruction_residual = reconstruction_residual(fam, candidate);
    return dual;
}

UniquenessReport dual_operator_uniqueness(const FrameFamily& fam, const IteratedRep& rep, const DualFamily& dual,
                                          const Tolerances& tol) {
    require_same_window(fam, dual.family);
    if (dual.reconstruction_residual > 1e-8) {
        std::ostringstream msg;
        msg << "dual candidate is not verified (reconstruction residual " << dual.reconstruction_residual << ")";
        throw Error(ErrorKind::NotApplicable, msg.str());
    }
    const IteratedRep v = build_iterated(dual.family, tol);
    if (!v.representable) {
        const FrameDiagnostics d = frame_bounds(dual.family, tol);
        std::ostringstream msg;
        msg << "dual '" << dual.family.label << "' is not representable (residual " << v.residual << ", excess "
            << d.excess << (d.linearly_independent ? "" : ", linearly dependent") << ")";
        throw Error(ErrorKind::NotApplicable, msg.str());
    }
    UniquenessReport r;
    r.applicable = true;
    r.v_norm = v.norm_on_span;
    // On span{g_k : k > k_min}, T* g_{k} = g_{k-1} and V g_{k-1} = g_k, so V T* is the identity there.
    const CMatrix& q = v.inverse_domain_basis;
    const CMatrix vt = v.op_matrix * rep.op_matrix.adjoint();
    r.residual = opnorm(vt * q - q);
    return r;
}

IntertwiningReport intertwining_check(const FrameFamily& fam, const IteratedRep& rep, const Tolerances& tol) {
    IntertwiningReport r;
    const Eigen::Index n = fam.size();
    const CMatrix& u = fam.vectors;
    const double u_norm = opnorm(u);
    const CMatrix lhs = rep.op_matrix * u - u * shift_matrix(n, ShiftDirection::Right);
    const Eigen::Index w = std::min<Eigen::Index>(tol.edge_width, n / 2);
    if (n - 2 * w > 0) r.tu_residual = opnorm(lhs.middleCols(w, n - 2 * w)) / u_norm;

    const CMatrix s = u * u.adjoint();
    const double s_norm = opnorm(s);
    const CMatrix& t = rep.op_matrix;
    if (rep.invertible) {
        const CMatrix gap = t * s * t.adjoint() - s;
        r.tst_residual = opnorm(gap) / s_norm;
        // TST* - S equals (T f_kmax)(T f_kmax)* - f_kmin f_kmin* on a window; compress those away.
        CMatrix edge(u.rows(), 2);
        edge.col(0) = u.col(0);
        edge.col(1) = t * u.col(n - 1);
        const CMatrix span_q = range_basis(u, tol.tau_scale);
        const CMatrix edge_q = range_basis(edge, tol.tau_scale);
        CMatrix p = span_q * span_q.adjoint();
        if (edge_q.cols() > 0) p -= edge_q * edge_q.adjoint();
        r.tst_interior = opnorm(p * gap * p) / s_norm;
    }

    const CMatrix& dom = rep.domain_basis;
    r.commutator = opnorm((s * t - t * s) * dom) / s_norm;
    const CMatrix td = t * dom;
    r.unitarity = opnorm(td.adjoint() * td - CMatrix::Identity(dom.cols(), dom.cols()));
    constexpr double kUnitaryTol = 1e-7;
    r.commutes = r.commutator <= kUnitaryTol;
    r.unitary = r.unitarity <= kUnitaryTol;
    r.biconditional_holds = r.commutes == r.unitary;
    return r;
}

ToeplitzReport toeplitz_unitarity_check(const FrameFamily& fam, const IteratedRep& rep) {
    ToeplitzReport r;
    const CMatrix g = gram(fam);
    const Eigen::Index n = g.rows();
    const double scale = g.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index d = -(n - 1); d <= n - 1; ++d) {
        const Eigen::Index i0 = std::max<Eigen::Index>(0, -d);
        const Complex ref = g(i0, i0 + d);
        for (Eigen::Index i = i0; i < n && i + d < n; ++i) worst = std::max(worst, std::abs(g(i, i + d) - ref));
    }
    r.toeplitz_defect = scale > 0.0 ? worst / scale : worst;
    r.toeplitz = r.toeplitz_defect <= 1e-8;
    if (!r.toeplitz) return r;
    r.checked = true;
    const CMatrix t_adj = rep.op_matrix.adjoint();
    for (long k = fam.k_min + 1; k <= fam.k_max; ++k) {
        const CVector fk = fam.at(k);
        r.adjoint_shift_residual =
            std::max(r.adjoint_shift_residual, (t_adj * fk - fam.at(k - 1)).norm() / fk.norm());
    }
    const CMatrix td = rep.op_matrix * rep.domain_basis;
    r.unitarity = opnorm(td.adjoint() * td - CMatrix::Identity(td.cols(), td.cols()));
    r.unitary = r.adjoint_shift_residual <= 1e-7 && r.unitarity <= 1e-7;
    return r;
}

}  // namespace fi
