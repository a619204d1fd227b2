#include "frame_iterates/iteration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include <Eigen/LU>

#include "frame_iterates/errors.hpp"

namespace fi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ShiftFit {
    CMatrix op;      // M x M
    CMatrix domain;  // orthonormal basis of span(from)
    double residual = 0.0;
    double norm = 0.0;
};

// Least-squares X with X from_k = to_k, zero on the orthogonal complement of span(from).
ShiftFit fit_shift(const CMatrix& from, const CMatrix& to, const Tolerances& tol) {
    ShiftFit fit;
    const Eigen::Index m = from.rows();
    const SvdResult s = svd(from);
    const Eigen::Index r = numerical_rank(s, from.rows(), from.cols(), tol.tau_scale);
    fit.domain = s.left_basis.leftCols(r);
    // X Q = to V_r diag(1/sigma): the action of X on the orthonormal domain basis.
    CMatrix image = to * s.right_basis.leftCols(r);
    for (Eigen::Index i = 0; i < r; ++i) image.col(i) /= s.singular_values(i);
    fit.op = r > 0 ? CMatrix(image * fit.domain.adjoint()) : CMatrix(CMatrix::Zero(m, m));
    fit.norm = r > 0 ? opnorm(image) : 0.0;
    const CMatrix mapped = fit.op * from;
    for (Eigen::Index k = 0; k < from.cols(); ++k) {
        const double target = to.col(k).norm();
        const double miss = (mapped.col(k) - to.col(k)).norm();
        const double scale = target > 0.0 ? target : std::max(from.col(k).norm(), 1.0);
        fit.residual = std::max(fit.residual, miss / scale);
    }
    return fit;
}

}  // namespace

IteratedRep build_iterated(const FrameFamily& fam, const Tolerances& tol) {
    fam.validate();
    if (fam.size() < 2) throw Error(ErrorKind::ShapeError, "representation needs at least two vectors");
    const Eigen::Index n = fam.size();
    const CMatrix lo = fam.vectors.leftCols(n - 1);
    const CMatrix hi = fam.vectors.rightCols(n - 1);
    IteratedRep rep;
    ShiftFit forward = fit_shift(lo, hi, tol);
    rep.op_matrix = std::move(forward.op);
    rep.domain_basis = std::move(forward.domain);
    rep.residual = forward.residual;
    rep.norm_on_span = forward.norm;
    rep.representable = rep.residual <= kRepresentationTol;
    ShiftFit backward = fit_shift(hi, lo, tol);
    rep.inverse_matrix = std::move(backward.op);
    rep.inverse_domain_basis = std::move(backward.domain);
    rep.inverse_residual = backward.residual;
    rep.invertible = rep.representable && rep.inverse_residual <= kRepresentationTol;
    rep.inv_norm_on_span = rep.invertible ? backward.norm : kInf;
    if (!rep.representable) rep.norm_on_span = kInf;
    return rep;
}

IteratedRep represent_by_iteration(const FrameFamily& fam, const Tolerances& tol) {
    IteratedRep rep = build_iterated(fam, tol);
    if (!rep.representable) {
        std::ostringstream msg;
        msg << "family '" << fam.label << "': residual " << rep.residual << " exceeds " << kRepresentationTol;
        throw Error(ErrorKind::NotRepresentable, msg.str());
    }
    return rep;
}

FrameFamily reversed(const FrameFamily& fam) {
    FrameFamily out = fam;
    out.label = fam.label + "-reversed";
    out.k_min = -fam.k_max;
    out.k_max = -fam.k_min;
    out.vectors = fam.vectors.rowwise().reverse();
    return out;
}

NormBoundsReport norm_bounds_check(const IteratedRep& rep, const FrameDiagnostics& diag, bool bounded_stable) {
    NormBoundsReport r;
    r.norm = rep.norm_on_span;
    r.inv_norm = rep.inv_norm_on_span;
    r.upper = std::sqrt(diag.upper_bound_B / diag.lower_bound_A) + 1e-6;
    r.lower_ok = r.norm >= r.lower;
    r.inv_lower_ok = r.inv_norm >= r.lower;
    r.upper_checked = bounded_stable;
    r.upper_ok = !bounded_stable || r.norm <= r.upper;
    r.inv_upper_ok = !bounded_stable || r.inv_norm <= r.upper;
    if (!(r.lower_ok && r.inv_lower_ok && r.upper_ok && r.inv_upper_ok)) {
        std::ostringstream msg;
        msg << "norm bounds: ||T|| = " << r.norm << ", ||T^-1|| = " << r.inv_norm << ", required ["
            << r.lower << ", " << (bounded_stable ? r.upper : kInf) << "]";
        throw Error(ErrorKind::ContractViolation, msg.str());
    }
    return r;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::BoundedStable: return "bounded-stable";
        case Verdict::Divergent: return "divergent";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double growth_exponent(const std::vector<long>& n, const std::vector<double>& norms) {
    if (n.size() != norms.size() || n.size() < 2) return 0.0;
    for (double v : norms)
        if (!std::isfinite(v)) return kInf;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(static_cast<double>(n[i]));
        const double y = std::log(norms[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = cnt * sxx - sx * sx;
    return denom > 0 ? (cnt * sxy - sx * sy) / denom : 0.0;
}

int worker_count(int requested) {
    const int hw = std::max(1u, std::thread::hardware_concurrency());
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FRAME_ITERATES_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) return std::min(cap, hw);
    }
    return hw;
}

namespace {

LadderWindow analyze_window(const FrameFamily& fam, long n, const Tolerances& tol) {
    LadderWindow w;
    w.n = n;
    const SynthesisOperator syn = synthesis(fam, tol);
    const FrameDiagnostics diag = frame_bounds(syn);
    w.sqrt_ratio = std::sqrt(diag.upper_bound_B / diag.lower_bound_A);
    w.excess = diag.excess;
    const IteratedRep rep = build_iterated(fam, tol);
    w.representable = rep.representable;
    w.residual = rep.residual;
    w.norm = rep.norm_on_span;
    w.inv_norm = rep.inv_norm_on_span;
    const KernelBasis ker = diagnostic_kernel(syn, tol);
    w.kernel_dim = ker.dim;
    w.near_kernel = ker.near;
    const ShiftDefect right = shift_invariance_defect(ker, ShiftDirection::Right, tol);
    const ShiftDefect left = shift_invariance_defect(ker, ShiftDirection::Left, tol);
    w.defect_right = right.defect;
    w.defect_left = left.defect;
    w.trusted = right.trusted;
    w.interior_dim = right.interior_dim;
    w.quarantined = right.quarantined;
    return w;
}

Verdict classify_growth(const BoundednessLadder& l) {
    if (l.windows.size() < 3) return Verdict::Inconclusive;
    if (l.growth_exponent >= 0.1) return Verdict::Divergent;
    if (l.growth_exponent > 0.02) return Verdict::Inconclusive;
    for (const auto& w : l.windows) {
        if (!w.representable) return Verdict::Inconclusive;
        if (w.trusted && w.norm > w.sqrt_ratio + 1e-6) return Verdict::Inconclusive;
    }
    return Verdict::BoundedStable;
}

Verdict classify_defects(const BoundednessLadder& l) {
    bool any_trusted = false, all_small = true, all_large = true, trusted_large = false;
    for (const auto& w : l.windows) {
        any_trusted = any_trusted || w.trusted;
        if (w.kernel_dim == 0) continue;
        if (w.defect_right > 1e-6) all_small = false;
        if (w.defect_right < 0.1) all_large = false;
        if (w.defect_right >= 0.1 && w.trusted) trusted_large = true;
    }
    if (!any_trusted) return Verdict::Inconclusive;
    if (all_small) return Verdict::BoundedStable;
    if (all_large && trusted_large) return Verdict::Divergent;
    return Verdict::Inconclusive;
}

}  // namespace

BoundednessLadder boundedness_ladder(const FamilyAtWindow& make, const std::vector<long>& windows,
                                     const LadderOptions& opt) {
    if (windows.size() < 3) throw Error(ErrorKind::SpecError, "ladder needs at least 3 windows");
    if (!std::is_sorted(windows.begin(), windows.end()) ||
        std::adjacent_find(windows.begin(), windows.end()) != windows.end())
        throw Error(ErrorKind::SpecError, "ladder windows must be strictly ascending");

    BoundednessLadder ladder;
    ladder.windows.resize(windows.size());
    std::vector<std::string> labels(windows.size());
    std::vector<std::exception_ptr> errors(windows.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < windows.size(); i = next++) {
            try {
                const FrameFamily fam = make(windows[i]);
                labels[i] = fam.label;
                ladder.windows[i] = analyze_window(fam, windows[i], opt.tol);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nworkers = std::min<int>(worker_count(opt.threads), static_cast<int>(windows.size()));
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nworkers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    ladder.label = labels.front();
    std::vector<double> norms;
    for (const auto& w : ladder.windows) norms.push_back(w.norm);
    ladder.growth_exponent = growth_exponent(windows, norms);
    ladder.growth_verdict = classify_growth(ladder);
    ladder.defect_verdict = classify_defects(ladder);
    if (ladder.growth_verdict == ladder.defect_verdict) {
        ladder.verdict = ladder.growth_verdict;
    } else {
        ladder.verdict = Verdict::Inconclusive;
        ladder.note = "norm growth says " + verdict_name(ladder.growth_verdict) + ", shift defects say " +
                      verdict_name(ladder.defect_verdict);
    }
    return ladder;
}

BoundednessLadder boundedness_ladder(const GeneratorSpec& spec, const std::vector<long>& windows,
                                     const LadderOptions& opt) {
    return boundedness_ladder([&spec](long n) { return generate(with_window(spec, n)); }, windows, opt);
}

ExcessGrowthReport excess_growth_check(const GeneratorSpec& spec, const std::vector<long>& windows,
                                       const Tolerances& tol) {
    ExcessGrowthReport r;
    r.windows = windows;
    for (long n : windows) r.excess.push_back(frame_bounds(generate(with_window(spec, n)), tol).excess);
    for (std::size_t i = 1; i < r.excess.size(); ++i)
        if (r.excess[i] < r.excess[i - 1]) r.nondecreasing = false;
    bool every_other = true;
    for (std::size_t i = 2; i < r.excess.size(); ++i)
        if (r.excess[i] <= r.excess[i - 2]) every_other = false;
    const bool any_excess = std::any_of(r.excess.begin(), r.excess.end(), [](auto e) { return e > 0; });
    r.grows = r.excess.size() >= 2 && r.excess.back() > r.excess.front() && every_other;
    if (any_excess && !(r.nondecreasing && r.grows)) {
        std::ostringstream msg;
        msg << "excess along the ladder is";
        for (auto e : r.excess) msg << ' ' << e;
        msg << "; a bounded operator requires it to grow without bound";
        throw Error(ErrorKind::ContractViolation, msg.str());
    }
    return r;
}

InjectivityReport extension_injectivity_probe(const CMatrix& op, const CMatrix& domain) {
    InjectivityReport r;
    if (domain.cols() == 0) return r;
    const CMatrix restricted = op * domain;
    const RVector s = singular_values(restricted);
    r.sigma_max = s(0);
    r.sigma_min = restricted.rows() >= restricted.cols() ? s(s.size() - 1) : 0.0;
    if (restricted.rows() == restricted.cols()) {
        Eigen::PartialPivLU<CMatrix> lu(restricted);
        const auto diag = lu.matrixLU().diagonal();
        if (diag.cwiseAbs().minCoeff() > 0.0) {
            const CMatrix inv = lu.solve(CMatrix::Identity(restricted.rows(), restricted.cols()));
            if (inv.allFinite()) r.sigma_min = 1.0 / opnorm(inv);
        } else {
            r.sigma_min = 0.0;
        }
    }
    return r;
}

InjectivityReport extension_injectivity_probe(const IteratedRep& rep, const FrameFamily&) {
    return extension_injectivity_probe(rep.op_matrix, rep.domain_basis);
}

}  // namespace fi
