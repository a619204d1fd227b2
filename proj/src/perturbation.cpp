#include "frame_iterates/perturbation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "frame_iterates/errors.hpp"

namespace fi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_shape(const FrameFamily& f, const FrameFamily& g) {
    if (f.k_min != g.k_min || f.k_max != g.k_max || f.ambient_dim() != g.ambient_dim()) {
        std::ostringstream msg;
        msg << "families differ in shape: [" << f.k_min << ", " << f.k_max << "] in C^" << f.ambient_dim() << " vs ["
            << g.k_min << ", " << g.k_max << "] in C^" << g.ambient_dim();
        throw Error(ErrorKind::ShapeError, msg.str());
    }
}

bool all_zero(const CMatrix& a) { return a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0; }

CMatrix kernel_of(const CMatrix& u, double tau_scale) {
    if (all_zero(u)) return CMatrix::Identity(u.cols(), u.cols());
    return null_basis(u, tau_scale);
}

double kernel_angle(const CMatrix& nf, const CMatrix& ng) {
    if (nf.cols() != ng.cols()) return std::numbers::pi / 2;
    if (nf.cols() == 0) return 0.0;
    return std::max(max_principal_angle(nf, ng), max_principal_angle(ng, nf));
}

void contract(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::ContractViolation, what);
}

FrameFamily subfamily(const FrameFamily& fam, const std::vector<long>& indices, const std::string& label) {
    const long len = static_cast<long>(indices.size());
    CMatrix cols(fam.ambient_dim(), len);
    for (long p = 0; p < len; ++p) cols.col(p) = fam.at(indices[p]);
    return make_family(label, -(len / 2), std::move(cols));
}

}  // namespace

PerturbationVerdict measure_perturbation(const FrameFamily& f, const FrameFamily& g, const Tolerances& tol) {
    require_same_shape(f, g);
    PerturbationVerdict v;
    const SynthesisOperator syn = synthesis(f, tol);
    const FrameDiagnostics diag = frame_bounds(syn);
    v.lower_bound_A = diag.lower_bound_A;
    v.upper_bound_B = diag.upper_bound_B;

    const CMatrix d = f.vectors - g.vectors;
    v.mu_min = opnorm(d);

    // sup ||D c|| / ||U_f c|| splits into the kernel of U_f (must be annihilated) and its row space.
    const Eigen::Index r = syn.rank;
    const CMatrix& vf = syn.factor.right_basis;
    const CMatrix nf = vf.rightCols(vf.cols() - r);
    v.kernel_leak = nf.cols() > 0 && opnorm(d * nf) > kRepresentationTol * syn.sigma_max();
    if (v.kernel_leak) {
        v.lambda1_min = kInf;
    } else {
        CMatrix scaled = d * vf.leftCols(r);
        for (Eigen::Index i = 0; i < r; ++i) scaled.col(i) /= syn.factor.singular_values(i);
        v.lambda1_min = opnorm(scaled);
    }
    v.cond_l1l2 = v.lambda1_min < 1.0;
    v.cond_mu = v.mu_min < std::sqrt(v.lower_bound_A);

    if (!all_zero(g.vectors)) {
        const CMatrix qf = syn.factor.left_basis.leftCols(r);
        const RVector s = singular_values(g.vectors.adjoint() * qf);
        const double smin = s.size() == r ? s(r - 1) : 0.0;
        v.g_is_frame = smin > rank_tolerance(g.vectors, tol.tau_scale);
        v.lower_bound_g = v.g_is_frame ? smin * smin : 0.0;
        const IteratedRep rep = build_iterated(g, tol);
        v.g_representable = rep.representable;
        v.g_residual = rep.residual;
    } else {
        v.g_residual = kInf;
    }
    v.kernel_angle = kernel_angle(kernel_of(f.vectors, tol.tau_scale), kernel_of(g.vectors, tol.tau_scale));
    return v;
}

PerturbationVerdict measure_perturbation(const FrameFamily& f, const FrameFamily& g, const PerturbationLadder& ladder,
                                         const Tolerances& tol) {
    PerturbationVerdict v = measure_perturbation(f, g, tol);
    v.ladder_f = boundedness_ladder(ladder.make_f, ladder.windows, ladder.options);
    v.ladder_g = boundedness_ladder(ladder.make_g, ladder.windows, ladder.options);
    v.f_ladder_verdict = v.ladder_f->verdict;
    v.g_ladder_verdict = v.ladder_g->verdict;
    return v;
}

TransferReport check_representability_transfer(const FrameFamily& f, const FrameFamily& g,
                                               const PerturbationVerdict& verdict, const Tolerances& tol) {
    TransferReport r;
    r.f_ladder_verdict = verdict.f_ladder_verdict;
    r.g_ladder_verdict = verdict.g_ladder_verdict;
    if (!verdict.cond_l1l2) {
        r.note = "lambda_1 condition fails (lambda1_min = " + std::to_string(verdict.lambda1_min) + "); no claim";
        return r;
    }
    if (!build_iterated(f, tol).representable) {
        r.note = "f is not representable; no claim";
        return r;
    }
    r.precondition = true;
    const IteratedRep rep_g = build_iterated(g, tol);
    r.g_representable = rep_g.representable;
    r.v_norm = rep_g.norm_on_span;
    r.kernel_angle = kernel_angle(kernel_of(f.vectors, tol.tau_scale), kernel_of(g.vectors, tol.tau_scale));
    r.kernels_equal = r.kernel_angle <= 1e-7;

    std::ostringstream msg;
    msg << "representability transfer: ";
    contract(r.g_representable, msg.str() + "g not representable (residual " + std::to_string(rep_g.residual) + ")");
    contract(r.kernels_equal, msg.str() + "kernel principal angle " + std::to_string(r.kernel_angle) + " > 1e-7");
    if (verdict.f_ladder_verdict == Verdict::BoundedStable)
        contract(verdict.g_ladder_verdict == Verdict::BoundedStable,
                 msg.str() + "f is bounded-stable but g's ladder is " +
                     (verdict.g_ladder_verdict ? verdict_name(*verdict.g_ladder_verdict) : std::string("missing")));
    return r;
}

MuIndependenceReport reproduce_mu_breaks_independence(double alpha, long window, const Tolerances& tol) {
    if (!(alpha > 0.0)) throw Error(ErrorKind::SpecError, "alpha must be positive");
    GeneratorSpec spec;
    spec.kind = GeneratorKind::OnbPlusDependent;
    spec.alpha = alpha;
    spec = with_window(spec, window);
    const FrameFamily f = generate(spec);
    FrameFamily g = f;
    g.label = f.label + "-zeroed";
    g.vectors.col(-f.k_min).setZero();

    MuIndependenceReport r;
    r.alpha = alpha;
    r.window = window;
    r.verdict = measure_perturbation(f, g, tol);
    r.mu_measured = r.verdict.mu_min;
    const double terms = static_cast<double>(spec.k_max - 1);
    r.mu_expected = alpha * std::sqrt((1.0 - std::pow(4.0, -terms)) / 3.0);
    r.sqrt_A = std::sqrt(r.verdict.lower_bound_A);
    r.f_representable = build_iterated(f, tol).representable;
    r.g_is_frame = r.verdict.g_is_frame;
    r.g_linearly_independent = frame_bounds(g, tol).linearly_independent;
    r.g_representable = r.verdict.g_representable;

    std::ostringstream ctx;
    ctx << "mu-independence (alpha = " << alpha << "): ";
    contract(std::abs(r.mu_measured - r.mu_expected) <= 1e-12 * std::max(1.0, alpha),
             ctx.str() + "measured mu " + std::to_string(r.mu_measured) + " differs from the inserted norm");
    contract(r.mu_measured <= alpha, ctx.str() + "mu exceeds alpha");
    contract(r.verdict.cond_mu, ctx.str() + "mu is not below sqrt(A)");
    contract(r.f_representable, ctx.str() + "control family f is not representable");
    contract(r.g_is_frame, ctx.str() + "g is not a frame for span(f)");
    contract(!r.g_linearly_independent, ctx.str() + "g is linearly independent");
    contract(!r.g_representable, ctx.str() + "g is representable");
    return r;
}

SincPerturbReport reproduce_mu_breaks_boundedness(double c, const std::vector<long>& windows, int rate,
                                                  const LadderOptions& opt) {
    if (!(c >= 0.0) || !(c < 1.0)) throw Error(ErrorKind::SpecError, "translation c must lie in [0, 1)");
    if (windows.empty()) throw Error(ErrorKind::SpecError, "no windows given");
    GeneratorSpec spec;
    spec.kind = GeneratorKind::SincOversampled;
    spec.rate = rate;
    const FamilyAtWindow make_f = [spec](long n) { return generate(with_window(spec, n)); };
    const FamilyAtWindow make_g = [spec, c](long n) {
        const GeneratorSpec s = with_window(spec, n);
        FrameFamily g = generate(s);
        g.label += "-perturbed";
        g.vectors.col(-s.k_min) = translated_generator(s, c);
        return g;
    };

    SincPerturbReport r;
    r.c = c;
    r.rate = rate;
    r.windows = windows;
    const long n = windows.back();
    const FrameFamily f = make_f(n);
    const FrameFamily g = make_g(n);
    r.mu = (f.at(0) - g.at(0)).norm();
    const FrameDiagnostics df = frame_bounds(f);
    r.sqrt_A = std::sqrt(df.lower_bound_A);

    std::vector<long> keep;
    for (long k = f.k_min; k <= f.k_max; ++k)
        if (k != -1 && k != 0) keep.push_back(k);
    const FrameFamily reduced = subfamily(f, keep, f.label + "-reduced");
    const CMatrix q_full = range_basis(f.vectors);
    const CMatrix q_reduced = range_basis(reduced.vectors);
    r.cond_a_complete = q_full.cols() == q_reduced.cols() && max_principal_angle(q_full, q_reduced) <= 1e-8;
    r.cond_b_mu = r.mu < r.sqrt_A;
    r.cond_c_independent = frame_bounds(g).linearly_independent;

    r.ladder_f = boundedness_ladder(make_f, windows, opt);
    r.ladder_g = boundedness_ladder(make_g, windows, opt);

    std::ostringstream ctx;
    ctx << "sinc-perturb (c = " << c << "): ";
    contract(r.ladder_f.verdict == Verdict::BoundedStable,
             ctx.str() + "f is " + verdict_name(r.ladder_f.verdict) + ", expected bounded-stable");
    if (c == 0.0) {
        r.claim_checked = true;
        contract(r.ladder_g.verdict == Verdict::BoundedStable, ctx.str() + "g = f but g is not bounded-stable");
    } else if (r.cond_b_mu) {
        r.claim_checked = true;
        contract(r.cond_a_complete, ctx.str() + "{f_k : k != -1, 0} does not span span(f)");
        contract(r.ladder_g.verdict == Verdict::Divergent,
                 ctx.str() + "g is " + verdict_name(r.ladder_g.verdict) + ", expected divergent");
    }
    return r;
}

RieszPartition residue_partition(long k_min, long k_max, int j) {
    if (j < 1) throw Error(ErrorKind::InvalidPartition, "partition needs at least one part");
    RieszPartition p;
    p.parts.resize(static_cast<std::size_t>(j));
    for (long k = k_min; k <= k_max; ++k) p.parts[static_cast<std::size_t>(((k % j) + j) % j)].push_back(k);
    return p;
}

namespace {

void validate_partition(const FrameFamily& f, const RieszPartition& partition) {
    if (partition.parts.empty()) throw Error(ErrorKind::InvalidPartition, "partition has no parts");
    std::set<long> seen;
    for (const auto& part : partition.parts) {
        if (part.empty()) throw Error(ErrorKind::InvalidPartition, "partition has an empty part");
        for (long k : part) {
            if (k < f.k_min || k > f.k_max)
                throw Error(ErrorKind::InvalidPartition, "index " + std::to_string(k) + " lies outside the window");
            if (!seen.insert(k).second)
                throw Error(ErrorKind::InvalidPartition, "index " + std::to_string(k) + " appears twice");
        }
    }
    if (static_cast<long>(seen.size()) != f.k_max - f.k_min + 1)
        throw Error(ErrorKind::InvalidPartition, "partition does not cover the window");
}

}  // namespace

PartitionReport verify_riesz_partition_stability(const FrameFamily& f, const RieszPartition& partition,
                                                 const FrameFamily& g, double mu,
                                                 const std::optional<PartitionLadder>& ladder, const Tolerances& tol) {
    require_same_shape(f, g);
    validate_partition(f, partition);
    PartitionReport r;
    r.mu = mu;
    r.A = frame_bounds(f, tol).lower_bound_A;
    for (std::size_t j = 0; j < partition.parts.size(); ++j) {
        const FrameFamily fp = subfamily(f, partition.parts[j], f.label + "-part" + std::to_string(j));
        const SynthesisOperator syn = synthesis(fp, tol);
        const FrameDiagnostics d = frame_bounds(syn);
        if (d.excess != 0)
            throw Error(ErrorKind::InvalidPartition, "f-part " + std::to_string(j) + " is linearly dependent");
        PartitionPart part;
        part.indices = partition.parts[j];
        part.f_lower_bound = d.lower_bound_A;
        r.A = std::min(r.A, d.lower_bound_A);
        r.parts.push_back(std::move(part));
    }
    r.mu_measured = opnorm(f.vectors - g.vectors);
    r.precondition = r.mu_measured <= mu * (1.0 + 1e-12) && mu < std::sqrt(r.A);
    if (!r.precondition) return r;

    r.all_parts_riesz = true;
    r.all_parts_bounded = true;
    for (std::size_t j = 0; j < r.parts.size(); ++j) {
        PartitionPart& part = r.parts[j];
        const FrameFamily gp = subfamily(g, part.indices, g.label + "-part" + std::to_string(j));
        const SynthesisOperator syn = synthesis(gp, tol);
        const FrameDiagnostics d = frame_bounds(syn);
        part.g_excess = d.excess;
        part.g_lower_bound = d.excess == 0 ? d.lower_bound_A : 0.0;
        part.g_riesz = d.excess == 0 && part.g_lower_bound > 0.0;
        const IteratedRep rep = build_iterated(gp, tol);
        part.g_representable = rep.representable;
        part.w_norm = rep.norm_on_span;
        part.phi = gp.at(0);
        if (ladder) {
            const PartitionLadder& lad = *ladder;
            const FamilyAtWindow make_part = [&lad, j](long n) {
                const FrameFamily gn = lad.make_g(n);
                const RieszPartition pn = lad.partition_at(gn);
                if (j >= pn.parts.size()) throw Error(ErrorKind::InvalidPartition, "partition lost a part");
                return subfamily(gn, pn.parts[j], gn.label + "-part" + std::to_string(j));
            };
            part.ladder_verdict = boundedness_ladder(make_part, lad.windows, lad.options).verdict;
        }
        r.all_parts_riesz = r.all_parts_riesz && part.g_riesz;
        r.all_parts_bounded = r.all_parts_bounded && part.g_representable &&
                              (!part.ladder_verdict || *part.ladder_verdict == Verdict::BoundedStable);

        std::ostringstream ctx;
        ctx << "Riesz partition, part " << j << ": ";
        contract(part.g_riesz, ctx.str() + "g-part is not a Riesz sequence (excess " + std::to_string(d.excess) + ")");
        contract(part.g_representable, ctx.str() + "g-part is not representable");
        if (part.ladder_verdict)
            contract(*part.ladder_verdict == Verdict::BoundedStable,
                     ctx.str() + "g-part ladder is " + verdict_name(*part.ladder_verdict));
        // Perturbation floor for a Riesz sequence under a mu-perturbation of its synthesis operator.
        contract(std::sqrt(part.g_lower_bound) >= std::sqrt(part.f_lower_bound) - r.mu_measured - 1e-8,
                 ctx.str() + "lower bound fell below sqrt(A) - mu");
    }
    return r;
}

namespace {

constexpr double kPartWeights[3] = {1.0, -0.6, 0.3};

FrameFamily partition_perturbed(const GeneratorSpec& spec, double t, long window) {
    const GeneratorSpec s = with_window(spec, window);
    FrameFamily g = generate(s);
    g.label += "-part-translated";
    for (long k = s.k_min; k <= s.k_max; ++k) {
        const int j = static_cast<int>(((k % 3) + 3) % 3);
        g.vectors.col(k - s.k_min) = translated_generator(s, static_cast<double>(k) / 3.0 + t * kPartWeights[j]);
    }
    return g;
}

}  // namespace

SincPartitionSetup sinc_partition_setup(long window, double mu_fraction) {
    if (window % 3 != 0) throw Error(ErrorKind::SpecError, "sinc partition window must be a multiple of 3");
    if (!(mu_fraction > 0.0) || !(mu_fraction < 1.0))
        throw Error(ErrorKind::SpecError, "mu fraction must lie in (0, 1)");
    SincPartitionSetup setup;
    setup.spec.kind = GeneratorKind::SincOversampled;
    setup.spec.rate = 3;
    setup.spec = with_window(setup.spec, window);
    const FrameFamily f = generate(setup.spec);
    setup.A = frame_bounds(f).lower_bound_A;
    for (const auto& part : residue_partition(f.k_min, f.k_max, 3).parts)
        setup.A = std::min(setup.A, frame_bounds(subfamily(f, part, "part")).lower_bound_A);
    setup.mu = mu_fraction * std::sqrt(setup.A);

    auto mu_at = [&](double t) { return opnorm(f.vectors - partition_perturbed(setup.spec, t, window).vectors); };
    double lo = 0.0, hi = 0.05;
    while (mu_at(hi) < setup.mu) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1.0) throw Error(ErrorKind::SpecError, "no translation reaches the requested mu");
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mu_at(mid) < setup.mu ? lo : hi) = mid;
    }
    // The lower end keeps the measured distance at or below mu.
    for (double w : kPartWeights) setup.offsets.push_back(lo * w);
    return setup;
}

FrameFamily sinc_partition_perturbed(const SincPartitionSetup& setup, long window) {
    if (setup.offsets.size() != 3) throw Error(ErrorKind::SpecError, "sinc partition setup has no offsets");
    return partition_perturbed(setup.spec, setup.offsets[0] / kPartWeights[0], window);
}

OracleReport monte_carlo_oracle(const FrameFamily& f, const FrameFamily& g, std::size_t probes, std::uint64_t seed,
                                int threads) {
    require_same_shape(f, g);
    constexpr std::size_t kChunk = 1000;
    const CMatrix& u = f.vectors;
    const CMatrix d = f.vectors - g.vectors;
    const Eigen::Index n = u.cols();
    const double floor = rank_tolerance(u) * 1e3;

    struct Extremes {
        double mu = 0.0, lambda1 = 0.0, rmin = kInf, rmax = 0.0;
    };
    const std::size_t chunks = (probes + kChunk - 1) / kChunk;
    std::vector<Extremes> partial(chunks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < chunks; c = next++) {
            std::seed_seq seq{seed, static_cast<std::uint64_t>(c)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> normal(0.0, 1.0);
            Extremes e;
            const std::size_t count = std::min(kChunk, probes - c * kChunk);
            CVector coeff(n);
            for (std::size_t p = 0; p < count; ++p) {
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double re = normal(rng);
                    coeff(i) = Complex(re, normal(rng));
                }
                const double cn = coeff.norm();
                const double un = (u * coeff).norm();
                const double dn = (d * coeff).norm();
                e.mu = std::max(e.mu, dn / cn);
                if (un > floor * cn) e.lambda1 = std::max(e.lambda1, dn / un);
                const double ratio = (un / cn) * (un / cn);
                e.rmin = std::min(e.rmin, ratio);
                e.rmax = std::max(e.rmax, ratio);
            }
            partial[c] = e;
        }
    };
    const int nworkers = std::min<int>(worker_count(threads), static_cast<int>(std::max<std::size_t>(chunks, 1)));
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nworkers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    OracleReport r;
    r.probes = probes;
    r.ratio_min = probes ? kInf : 0.0;
    for (const auto& e : partial) {
        r.mu_sup = std::max(r.mu_sup, e.mu);
        r.lambda1_sup = std::max(r.lambda1_sup, e.lambda1);
        r.ratio_min = std::min(r.ratio_min, e.rmin);
        r.ratio_max = std::max(r.ratio_max, e.rmax);
    }
    const EighResult eg = eigh(gram(f));
    r.gram_min = eg.eigenvalues(0);
    r.gram_max = eg.eigenvalues(eg.eigenvalues.size() - 1);
    return r;
}

}  // namespace fi
