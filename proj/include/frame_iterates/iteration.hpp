#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "frame_iterates/frames.hpp"
#include "frame_iterates/generators.hpp"

namespace fi {

inline constexpr double kRepresentationTol = 1e-8;

struct IteratedRep {
    CMatrix op_matrix;             // M x M: T on span{f_k : k < k_max}, zero on its complement
    CMatrix domain_basis;          // orthonormal basis of span{f_k : k < k_max}
    CMatrix inverse_matrix;        // M x M: T^{-1} built from the reversed family
    CMatrix inverse_domain_basis;  // orthonormal basis of span{f_k : k > k_min}
    long f0_index = 0;
    double residual = 0.0;
    double inverse_residual = 0.0;
    double norm_on_span = 0.0;
    double inv_norm_on_span = std::numeric_limits<double>::infinity();
    bool representable = false;
    bool invertible = false;
};

// Least-squares construction of T with T f_k = f_{k+1}; never throws on a failed fit, the
// residual and `representable` flag carry the outcome.
IteratedRep build_iterated(const FrameFamily& fam, const Tolerances& tol = {});

// As build_iterated, but throws NotRepresentable when the residual exceeds 1e-8.
IteratedRep represent_by_iteration(const FrameFamily& fam, const Tolerances& tol = {});

// Index-reversed family {f_{-k}}.
FrameFamily reversed(const FrameFamily& fam);

struct NormBoundsReport {
    double norm = 0.0;
    double inv_norm = 0.0;
    double lower = 1.0 - 1e-8;
    double upper = 0.0;  // sqrt(B/A) + 1e-6
    bool lower_ok = false;
    bool upper_ok = false;
    bool inv_lower_ok = false;
    bool inv_upper_ok = false;
    bool upper_checked = false;
};

// Checks ||T|| >= 1 - 1e-8 (and the inverse); with bounded_stable also ||T|| <= sqrt(B/A) + 1e-6.
// Throws ContractViolation with the measured values on failure.
NormBoundsReport norm_bounds_check(const IteratedRep& rep, const FrameDiagnostics& diag, bool bounded_stable);

enum class Verdict { BoundedStable, Divergent, Inconclusive };
std::string verdict_name(Verdict v);

struct LadderWindow {
    long n = 0;
    bool representable = false;
    double residual = 0.0;
    double norm = 0.0;  // infinite when no operator realizes the shift on the window
    double inv_norm = 0.0;
    double sqrt_ratio = 0.0;  // sqrt(B/A) of the window
    Eigen::Index excess = 0;
    Eigen::Index kernel_dim = 0;
    bool near_kernel = false;
    double defect_right = 0.0;
    double defect_left = 0.0;
    bool trusted = true;
    Eigen::Index interior_dim = 0;
    Eigen::Index quarantined = 0;
};

struct BoundednessLadder {
    std::string label;
    std::vector<LadderWindow> windows;
    double growth_exponent = 0.0;
    Verdict growth_verdict = Verdict::Inconclusive;  // from norms alone
    Verdict defect_verdict = Verdict::Inconclusive;  // from shift defects alone
    Verdict verdict = Verdict::Inconclusive;         // agreement of the two, else inconclusive
    std::string note;
};

struct LadderOptions {
    Tolerances tol;
    int threads = 0;  // 0 reads FRAME_ITERATES_THREADS, defaulting to hardware concurrency
};

using FamilyAtWindow = std::function<FrameFamily(long n)>;

// Slope of log(norm) against log(n) by least squares; +infinity if any norm is infinite.
double growth_exponent(const std::vector<long>& n, const std::vector<double>& norms);

BoundednessLadder boundedness_ladder(const FamilyAtWindow& make, const std::vector<long>& windows,
                                     const LadderOptions& opt = {});
BoundednessLadder boundedness_ladder(const GeneratorSpec& spec, const std::vector<long>& windows,
                                     const LadderOptions& opt = {});

// Worker count from FRAME_ITERATES_THREADS (capped at hardware concurrency), or `requested` if > 0.
int worker_count(int requested);

struct ExcessGrowthReport {
    std::vector<long> windows;
    std::vector<Eigen::Index> excess;
    bool nondecreasing = true;
    bool grows = false;
};

// For a bounded-stable family with excess: excess must be nondecreasing and increase at least
// every other window. Throws ContractViolation otherwise; Riesz families pass with excess 0.
ExcessGrowthReport excess_growth_check(const GeneratorSpec& spec, const std::vector<long>& windows,
                                       const Tolerances& tol = {});

struct InjectivityReport {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

// Smallest singular value of op restricted to range(domain) (orthonormal columns). Square
// invertible restrictions are handled through an LU solve so that values far below
// eps * sigma_max remain resolvable.
InjectivityReport extension_injectivity_probe(const CMatrix& op, const CMatrix& domain);
InjectivityReport extension_injectivity_probe(const IteratedRep& rep, const FrameFamily& fam);

}  // namespace fi
