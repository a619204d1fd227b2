#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frame_iterates/frames.hpp"
#include "frame_iterates/generators.hpp"
#include "frame_iterates/iteration.hpp"

namespace fi {

struct PerturbationVerdict {
    double mu_min = 0.0;       // ||U_f - U_g||
    double lambda1_min = 0.0;  // sup ||(U_f - U_g) c|| / ||U_f c||; infinite on a kernel leak
    bool kernel_leak = false;  // U_f - U_g does not vanish on the kernel of U_f
    double lower_bound_A = 0.0;
    double upper_bound_B = 0.0;
    double lower_bound_g = 0.0;  // lower frame bound of g on span(f), zero when g is not a frame there
    bool cond_l1l2 = false;      // lambda_1 < 1 with lambda_2 = mu = 0
    bool cond_mu = false;        // mu < sqrt(A) with lambda_1 = lambda_2 = 0
    bool g_is_frame = false;
    bool g_representable = false;
    double g_residual = 0.0;
    double kernel_angle = 0.0;  // largest principal angle between N_{U_f} and N_{U_g}
    std::optional<Verdict> f_ladder_verdict;
    std::optional<Verdict> g_ladder_verdict;
    std::optional<BoundednessLadder> ladder_f;
    std::optional<BoundednessLadder> ladder_g;
};

// Families at each ladder window; both must share the window convention.
struct PerturbationLadder {
    FamilyAtWindow make_f;
    FamilyAtWindow make_g;
    std::vector<long> windows;
    LadderOptions options;
};

// Throws ShapeError unless f and g share window and ambient dimension.
PerturbationVerdict measure_perturbation(const FrameFamily& f, const FrameFamily& g, const Tolerances& tol = {});
PerturbationVerdict measure_perturbation(const FrameFamily& f, const FrameFamily& g, const PerturbationLadder& ladder,
                                         const Tolerances& tol = {});

struct TransferReport {
    bool precondition = false;  // cond_l1l2 and f representable
    std::string note;
    bool g_representable = false;
    double v_norm = 0.0;
    double kernel_angle = 0.0;
    bool kernels_equal = false;
    std::optional<Verdict> f_ladder_verdict;
    std::optional<Verdict> g_ladder_verdict;
};

// When the precondition holds, g must be representable with N_{U_g} = N_{U_f}, and a bounded-stable
// ladder for f must carry over to g. Violations throw ContractViolation.
TransferReport check_representability_transfer(const FrameFamily& f, const FrameFamily& g,
                                               const PerturbationVerdict& verdict, const Tolerances& tol = {});

struct MuIndependenceReport {
    double alpha = 0.0;
    long window = 0;
    double mu_measured = 0.0;
    double mu_expected = 0.0;  // alpha * sqrt((1 - 4^{-J}) / 3), the norm of the inserted vector
    double sqrt_A = 0.0;
    bool f_representable = false;
    bool g_is_frame = false;
    bool g_linearly_independent = false;
    bool g_representable = false;
    PerturbationVerdict verdict;
};

// f: orthonormal window with alpha * sum_j 2^{-j} e_j at index 0; g: the same window with that
// vector replaced by 0. Throws ContractViolation if g turns out representable or mu >= sqrt(A).
MuIndependenceReport reproduce_mu_breaks_independence(double alpha = 0.5, long window = 32, const Tolerances& tol = {});

struct SincPerturbReport {
    double c = 0.0;
    int rate = 3;
    std::vector<long> windows;
    double mu = 0.0;  // ||f_0 - T_c f_0||
    double sqrt_A = 0.0;
    bool cond_a_complete = false;  // {f_k}, k != -1, 0, spans span(f) on the largest window
    bool cond_b_mu = false;        // mu < sqrt(A)
    bool cond_c_independent = false;
    bool claim_checked = false;  // false when condition (b) fails: nothing is asserted
    BoundednessLadder ladder_f;
    BoundednessLadder ladder_g;
};

// g equals the oversampled sinc family with f_0 replaced by T_c f_0. With c > 0 and condition (b)
// in force, f must come out bounded-stable and g divergent; otherwise ContractViolation.
SincPerturbReport reproduce_mu_breaks_boundedness(double c = 0.1, const std::vector<long>& windows = {12, 24, 48, 96},
                                                  int rate = 3, const LadderOptions& opt = {});

struct RieszPartition {
    std::vector<std::vector<long>> parts;  // window indices per part
};

// Index classes k mod j of the window [k_min, k_max].
RieszPartition residue_partition(long k_min, long k_max, int j);

struct PartitionPart {
    std::vector<long> indices;
    double f_lower_bound = 0.0;
    double g_lower_bound = 0.0;
    Eigen::Index g_excess = 0;
    bool g_riesz = false;
    bool g_representable = false;
    double w_norm = 0.0;  // norm of W_j on the part's span at the verified window
    CVector phi;          // g-part element at part position 0
    std::optional<Verdict> ladder_verdict;
};

struct PartitionReport {
    double A = 0.0;  // min of the lower bound of f and the part lower bounds
    double mu = 0.0;
    double mu_measured = 0.0;
    bool precondition = false;  // mu_measured <= mu < sqrt(A)
    std::vector<PartitionPart> parts;
    bool all_parts_riesz = false;
    bool all_parts_bounded = false;
};

struct PartitionLadder {
    FamilyAtWindow make_g;
    std::function<RieszPartition(const FrameFamily&)> partition_at;
    std::vector<long> windows;
    LadderOptions options;
};

// Throws InvalidPartition when parts overlap, miss an index, or an f-part is not a Riesz sequence;
// ContractViolation when the precondition holds but a g-part is not Riesz or not bounded-stable.
PartitionReport verify_riesz_partition_stability(const FrameFamily& f, const RieszPartition& partition,
                                                 const FrameFamily& g, double mu,
                                                 const std::optional<PartitionLadder>& ladder = std::nullopt,
                                                 const Tolerances& tol = {});

struct SincPartitionSetup {
    GeneratorSpec spec;           // sinc_oversampled, rate 3
    std::vector<double> offsets;  // per-part translation applied to g
    double A = 0.0;
    double mu = 0.0;
};

// Per-part translations t * (1, -0.6, 0.3) with t chosen by bisection so that ||U_f - U_g|| equals
// mu_fraction * sqrt(A) at the given window.
SincPartitionSetup sinc_partition_setup(long window, double mu_fraction = 0.5);
FrameFamily sinc_partition_perturbed(const SincPartitionSetup& setup, long window);

struct OracleReport {
    std::size_t probes = 0;
    double mu_sup = 0.0;       // max ||(U_f - U_g) c|| / ||c||
    double lambda1_sup = 0.0;  // max ||(U_f - U_g) c|| / ||U_f c||
    double ratio_min = 0.0;    // min ||U_f c||^2 / ||c||^2
    double ratio_max = 0.0;
    double gram_min = 0.0;  // extreme Gram eigenvalues of f
    double gram_max = 0.0;
};

// Seeded Monte-Carlo probes over Gaussian coefficient vectors, evaluated in chunks of 1000 with
// per-chunk seeds; the max/min reduction makes the result independent of the worker count.
OracleReport monte_carlo_oracle(const FrameFamily& f, const FrameFamily& g, std::size_t probes = 10000,
                                std::uint64_t seed = 1, int threads = 0);

}  // namespace fi
