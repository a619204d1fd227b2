#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "frame_iterates/cli.hpp"
#include "frame_iterates/errors.hpp"

namespace fi {

namespace {

void contract(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::ContractViolation, what);
}

std::vector<long> windows_or(const RunConfig& cfg, std::vector<long> fallback) {
    return cfg.windows.empty() ? fallback : cfg.windows;
}

LadderOptions ladder_options(const RunConfig& cfg) {
    LadderOptions opt;
    opt.tol = tolerances_for(cfg);
    return opt;
}

GeneratorSpec make_spec(GeneratorKind kind, long n) {
    GeneratorSpec s;
    s.kind = kind;
    return with_window(s, n);
}

GeneratorSpec translates(const std::string& profile, long n) {
    GeneratorSpec s = make_spec(GeneratorKind::ShiftInvariant, n);
    s.profile = profile;
    return s;
}

GeneratorSpec gabor(GaborOrdering ordering, long n) {
    GeneratorSpec s = make_spec(GeneratorKind::Gabor, n);
    s.ordering = ordering;
    return s;
}

double unitarity_on_domain(const IteratedRep& rep) {
    const CMatrix td = rep.op_matrix * rep.domain_basis;
    return opnorm(td.adjoint() * td - CMatrix::Identity(td.cols(), td.cols()));
}

Json fourier_onb(const RunConfig& cfg) {
    const Tolerances tol = tolerances_for(cfg);
    const FrameFamily fam = generate(make_spec(GeneratorKind::Fourier, 16));
    const IteratedRep rep = represent_by_iteration(fam, tol);
    const double modulation_gap = opnorm((rep.op_matrix - fourier_modulation(fam.ambient_dim())) * rep.domain_basis);
    const FrameDiagnostics d = frame_bounds(fam, tol);
    const BoundednessLadder ladder =
        boundedness_ladder(make_spec(GeneratorKind::Fourier, 8), windows_or(cfg, {8, 16, 32, 64}), ladder_options(cfg));
    contract(rep.residual <= 1e-10, "Fourier residual " + std::to_string(rep.residual) + " exceeds 1e-10");
    contract(modulation_gap <= 1e-10, "T differs from multiplication by e^{2 pi i x}");
    contract(std::abs(d.lower_bound_A - 1.0) <= 1e-10 && std::abs(d.upper_bound_B - 1.0) <= 1e-10,
             "Fourier window is not orthonormal");
    contract(ladder.verdict == Verdict::BoundedStable, "Fourier ladder is " + verdict_name(ladder.verdict));
    return Json{{"family", fam.label},
                {"diagnostics", to_json(d)},
                {"representation", to_json(rep)},
                {"modulation_gap", number(modulation_gap)},
                {"ladder", to_json(ladder)}};
}

Json shift_invariant(const RunConfig& cfg) {
    Json profiles = Json::object();
    const std::map<std::string, std::pair<bool, bool>> expected = {
        {"sinc", {true, true}}, {"sinc_half", {true, false}}, {"raised", {true, false}}};
    for (const auto& [name, want] : expected) {
        const PhiProfile p = phi_profile(profile_samples(name, 16, 8), 8);
        const BoundednessLadder ladder =
            boundedness_ladder(translates(name, 8), windows_or(cfg, {8, 16, 32, 64}), ladder_options(cfg));
        const FrameFamily fam = generate(translates(name, 16));
        const ToeplitzReport tp = toeplitz_unitarity_check(fam, build_iterated(fam, tolerances_for(cfg)));
        contract(p.frame_sequence == want.first && p.riesz == want.second,
                 "profile '" + name + "' has an unexpected frame-sequence/Riesz verdict");
        contract(ladder.verdict == Verdict::BoundedStable, "translates of '" + name + "' are not bounded-stable");
        contract(tp.toeplitz && tp.unitary, "translates of '" + name + "' lack a Toeplitz Gram or unitary T");
        Json entry = to_json(p);
        entry.erase("grid");
        entry.erase("values");
        entry["excess_at_16"] = frame_bounds(fam).excess;
        entry["toeplitz"] = to_json(tp);
        entry["ladder_verdict"] = verdict_name(ladder.verdict);
        profiles[name] = entry;
    }
    return Json{{"profiles", profiles}};
}

Json gabor_unbounded(const RunConfig& cfg) {
    const BoundednessLadder reordered =
        boundedness_ladder(gabor(GaborOrdering::Interleaved3, 8), windows_or(cfg, {8, 16, 32, 64}), ladder_options(cfg));
    const BoundednessLadder lattice =
        boundedness_ladder(gabor(GaborOrdering::Lattice, 12), {12, 24, 48}, ladder_options(cfg));
    // The odd slots carry the orthonormal basis {E_m T_n chi}.
    const FrameFamily fam = generate(gabor(GaborOrdering::Interleaved3, 32));
    std::vector<Eigen::Index> odd;
    for (long k = fam.k_min; k <= fam.k_max; ++k)
        if (k % 2 != 0) odd.push_back(k - fam.k_min);
    CMatrix sub(fam.ambient_dim(), static_cast<Eigen::Index>(odd.size()));
    for (std::size_t i = 0; i < odd.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = fam.vectors.col(odd[i]);
    const double onb_defect = (sub.adjoint() * sub - CMatrix::Identity(sub.cols(), sub.cols())).cwiseAbs().maxCoeff();
    contract(reordered.verdict == Verdict::Divergent, "reordered Gabor ladder is " + verdict_name(reordered.verdict));
    contract(reordered.growth_exponent >= 0.1, "reordered Gabor growth exponent below 0.1");
    contract(lattice.verdict == Verdict::BoundedStable, "lattice Gabor ladder is " + verdict_name(lattice.verdict));
    contract(onb_defect <= 1e-8, "odd-slot subfamily is not orthonormal");
    return Json{{"reordered", to_json(reordered)}, {"lattice", to_json(lattice)}, {"odd_slot_onb_defect", number(onb_defect)}};
}

std::vector<GeneratorSpec> tight_corpus() {
    GeneratorSpec sinc3 = make_spec(GeneratorKind::SincOversampled, 24);
    return {make_spec(GeneratorKind::Fourier, 16), translates("sinc", 16), translates("sinc_half", 16), sinc3,
            gabor(GaborOrdering::Lattice, 24)};
}

Json tight_isometry(const RunConfig& cfg) {
    const Tolerances tol = tolerances_for(cfg);
    Json cases = Json::array();
    for (const GeneratorSpec& spec : tight_corpus()) {
        const FrameFamily fam = generate(spec);
        const FrameDiagnostics d = frame_bounds(fam, tol);
        const IteratedRep rep = represent_by_iteration(fam, tol);
        const double u = unitarity_on_domain(rep);
        contract(d.tight, fam.label + " is not tight");
        contract(u <= 1e-6, fam.label + ": ||T*T - I|| = " + std::to_string(u));
        cases.push_back(Json{{"family", fam.label}, {"A", number(d.lower_bound_A)}, {"B", number(d.upper_bound_B)},
                             {"isometry_defect", number(u)}});
    }
    return Json{{"cases", cases}};
}

Json canonical_dual_iterated(const RunConfig& cfg) {
    const Tolerances tol = tolerances_for(cfg);
    std::vector<GeneratorSpec> specs = tight_corpus();
    specs.push_back(translates("raised", 16));
    specs.push_back(make_spec(GeneratorKind::WeightedOnb, 16));
    Json cases = Json::array();
    for (const GeneratorSpec& spec : specs) {
        const FrameFamily fam = generate(spec);
        const IteratedRep rep = represent_by_iteration(fam, tol);
        contract(rep.invertible, fam.label + ": T is not invertible on the span");
        const DualFamily dual = canonical_dual(fam, rep, tol);
        contract(dual.reconstruction_residual <= 1e-8, fam.label + ": canonical dual does not reconstruct");
        contract(dual.iterated_form_residual && *dual.iterated_form_residual <= 1e-7,
                 fam.label + ": canonical dual is not of the form (T*)^{-k} g_0");
        Json entry = to_json(dual);
        entry["family"] = fam.label;
        cases.push_back(entry);
    }
    return Json{{"cases", cases}};
}

Json zero_padded_dual(const RunConfig& cfg) {
    const Tolerances tol = tolerances_for(cfg);
    const FrameFamily fam = generate(translates("sinc_half", 16));
    const Eigen::Index slot = -fam.k_min;
    CMatrix reduced(fam.ambient_dim(), fam.size() - 1);
    reduced << fam.vectors.leftCols(slot), fam.vectors.rightCols(fam.size() - slot - 1);
    const CMatrix q_full = range_basis(fam.vectors, tol.tau_scale);
    const CMatrix q_reduced = range_basis(reduced, tol.tau_scale);
    const bool same_span = q_full.cols() == q_reduced.cols() && max_principal_angle(q_full, q_reduced) <= 1e-8;
    const CMatrix reduced_dual = pinv(reduced, tol.tau_scale).adjoint();
    CMatrix padded(fam.ambient_dim(), fam.size());
    padded << reduced_dual.leftCols(slot), CVector::Zero(fam.ambient_dim()),
        reduced_dual.rightCols(fam.size() - slot - 1);
    FrameFamily g = make_family(fam.label + "-zero-padded-dual", fam.k_min, padded);
    const DualFamily dual = user_dual(fam, g);
    const FrameDiagnostics dg = frame_bounds(g, tol);
    const IteratedRep rep_g = build_iterated(g, tol);
    UniquenessReport uniq;
    try {
        uniq = dual_operator_uniqueness(fam, build_iterated(fam, tol), dual, tol);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotApplicable) throw;
        uniq.reason = e.what();
    }
    contract(same_span, "removing f_0 changed the span");
    contract(dual.reconstruction_residual <= 1e-8, "zero-padded family is not a dual");
    contract(!dg.linearly_independent, "zero-padded dual is linearly independent");
    contract(!rep_g.representable, "zero-padded dual is representable");
    contract(!uniq.applicable, "uniqueness check accepted the zero-padded dual");
    return Json{{"family", fam.label},
                {"dual", to_json(dual)},
                {"dual_diagnostics", to_json(dg)},
                {"dual_representation", to_json(rep_g)},
                {"verdict", "NotRepresentable"},
                {"uniqueness", to_json(uniq)}};
}

Json mu_independence(const RunConfig& cfg) {
    const std::vector<double> alphas = cfg.alpha ? std::vector<double>{*cfg.alpha} : std::vector<double>{1e-3, 0.1, 0.5};
    Json cases = Json::array();
    for (double a : alphas) cases.push_back(to_json(reproduce_mu_breaks_independence(a, 32, tolerances_for(cfg))));
    return Json{{"cases", cases}};
}

Json sinc_perturb(const RunConfig& cfg) {
    return to_json(reproduce_mu_breaks_boundedness(cfg.c.value_or(0.1), windows_or(cfg, {12, 24, 48, 96}), 3,
                                                   ladder_options(cfg)));
}

Json riesz_partition(const RunConfig& cfg) {
    const Tolerances tol = tolerances_for(cfg);
    const long window = 24;
    const SincPartitionSetup setup = sinc_partition_setup(window, 0.5);
    const FrameFamily f = generate(setup.spec);
    const FrameFamily g = sinc_partition_perturbed(setup, window);
    PartitionLadder ladder;
    ladder.make_g = [&setup](long n) { return sinc_partition_perturbed(setup, n); };
    ladder.partition_at = [](const FrameFamily& fam) { return residue_partition(fam.k_min, fam.k_max, 3); };
    ladder.windows = windows_or(cfg, {12, 24, 48, 96});
    ladder.options = ladder_options(cfg);
    const PartitionReport r =
        verify_riesz_partition_stability(f, residue_partition(f.k_min, f.k_max, 3), g, setup.mu, ladder, tol);
    contract(r.precondition, "partition precondition mu < sqrt(A) failed");
    contract(r.all_parts_riesz && r.all_parts_bounded, "a perturbed part is not a bounded-stable Riesz sequence");
    Json j = to_json(r);
    j["offsets"] = setup.offsets;
    return j;
}

Json interleaved_unbounded(const RunConfig& cfg) {
    const Tolerances tol = tolerances_for(cfg);
    const std::vector<long> windows = windows_or(cfg, {8, 16, 32, 64});
    const GeneratorSpec spec = make_spec(GeneratorKind::InterleavedOnb, 8);
    std::vector<Eigen::Index> excess;
    for (long n : windows) excess.push_back(frame_bounds(generate(with_window(spec, n)), tol).excess);
    const BoundednessLadder ladder = boundedness_ladder(spec, windows, ladder_options(cfg));
    contract(std::all_of(excess.begin(), excess.end(), [](auto e) { return e == 0; }),
             "union of the two bases is not linearly independent on a window");
    contract(ladder.verdict == Verdict::Divergent, "interleaved bases ladder is " + verdict_name(ladder.verdict));
    return Json{{"excess", excess}, {"ladder", to_json(ladder)}};
}

Json extension_noninjective(const RunConfig& cfg) {
    const Tolerances tol = tolerances_for(cfg);
    const std::vector<long> windows = windows_or(cfg, {8, 16, 32, 64});
    Json rows = Json::array();
    std::vector<double> sigma;
    for (long n : windows) {
        const InjectivityReport r = extension_injectivity_probe(appendix_extension(n), CMatrix::Identity(n, n));
        sigma.push_back(r.sigma_min);
        rows.push_back(Json{{"n", n}, {"sigma_min", number(r.sigma_min)}, {"sigma_max", number(r.sigma_max)}});
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < sigma.size(); ++i) decreasing = decreasing && sigma[i] < sigma[i - 1];
    GeneratorSpec closed = make_spec(GeneratorKind::RieszAppendix, 8);
    closed.closed = true;
    const FrameDiagnostics d = frame_bounds(generate(closed), tol);
    contract(decreasing, "sigma_min of the extension is not strictly decreasing");
    contract(d.excess == 1, "closed appendix window does not have excess 1");
    return Json{{"extension", rows}, {"strictly_decreasing", decreasing}, {"closed_window", to_json(d)}};
}

const std::map<std::string, std::function<Json(const RunConfig&)>>& registry() {
    static const std::map<std::string, std::function<Json(const RunConfig&)>> table = {
        {"fourier-onb", fourier_onb},
        {"shift-invariant", shift_invariant},
        {"gabor-unbounded", gabor_unbounded},
        {"tight-isometry", tight_isometry},
        {"canonical-dual-iterated", canonical_dual_iterated},
        {"zero-padded-dual", zero_padded_dual},
        {"mu-independence", mu_independence},
        {"sinc-perturb", sinc_perturb},
        {"riesz-partition", riesz_partition},
        {"interleaved-unbounded", interleaved_unbounded},
        {"extension-noninjective", extension_noninjective},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& reproduction_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, fn] : registry()) out.push_back(name);
        return out;
    }();
    return names;
}

Json reproduce(const std::string& name, const RunConfig& cfg) {
    const auto it = registry().find(name);
    if (it == registry().end()) {
        std::ostringstream msg;
        msg << "unknown reproduction '" << name << "'; expected one of:";
        for (const auto& n : reproduction_names()) msg << ' ' << n;
        throw Error(ErrorKind::SpecError, msg.str());
    }
    return it->second(cfg);
}

}  // namespace fi
