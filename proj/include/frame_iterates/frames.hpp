#pragma once

#include <optional>
#include <string>

#include "frame_iterates/numerics.hpp"

namespace fi {

// Tolerance set shared by every analysis entry point; reports echo it back verbatim.
struct Tolerances {
    double tau_scale = 1.0;           // multiplies the spectral rank cutoff
    double eta = 1e-6;                // edge-mass bound for trusting a kernel direction
    int edge_width = 1;               // number of coefficient slots at each window end
    double near_kernel_theta = 1e-2;  // near-kernel cutoff as a fraction of the reference lower bound
};

// A finite window {f_k}, k_min <= k <= k_max, of a family in C^M. Column j of `vectors` is f_{k_min+j}.
struct FrameFamily {
    std::string label;
    long k_min = 0;
    long k_max = -1;
    CMatrix vectors;
    // Lower frame bound of the untruncated family when the constructor knows it; enables the
    // near-kernel used by the shift-defect diagnostics on windows that are numerically independent.
    std::optional<double> reference_lower_bound;

    Eigen::Index ambient_dim() const { return vectors.rows(); }
    Eigen::Index size() const { return vectors.cols(); }
    CVector at(long k) const { return vectors.col(k - k_min); }

    // Throws DegenerateFamily/ShapeError/InvalidMatrix when an invariant fails.
    void validate() const;
};

FrameFamily make_family(std::string label, long k_min, CMatrix vectors);

struct SynthesisOperator {
    CMatrix matrix;  // M x n
    long k_min = 0;
    long k_max = -1;
    SvdResult factor;
    double tau = 0.0;
    Eigen::Index rank = 0;
    std::optional<double> reference_lower_bound;

    double sigma_max() const { return factor.singular_values.size() ? factor.singular_values(0) : 0.0; }
};

struct KernelBasis {
    CMatrix basis;      // n x d, orthonormal, ordered by ascending edge mass
    Eigen::Index dim = 0;
    RVector edge_mass;  // per column, squared coefficient mass in the first and last w slots
    int edge_width = 1;
    bool near = false;  // true when directions below the near-kernel cutoff were admitted
};

struct FrameDiagnostics {
    double lower_bound_A = 0.0;
    double upper_bound_B = 0.0;
    Eigen::Index rank = 0;
    Eigen::Index excess = 0;
    Eigen::Index count = 0;
    bool linearly_independent = false;
    bool tight = false;
};

enum class ShiftDirection { Right, Left };

struct ShiftResult {
    CVector shifted;
    double dropped = 0.0;  // magnitude of the coefficient pushed out of the window
};

struct ShiftDefect {
    double defect = 0.0;
    bool trusted = true;
    Eigen::Index interior_dim = 0;  // kernel directions with edge mass <= eta
    Eigen::Index quarantined = 0;   // kernel directions excluded for edge mass > eta
};

SynthesisOperator synthesis(const FrameFamily& fam, const Tolerances& tol = {});

FrameDiagnostics frame_bounds(const FrameFamily& fam, const Tolerances& tol = {});
FrameDiagnostics frame_bounds(const SynthesisOperator& syn);

// Exact kernel: right singular vectors with sigma <= tau.
KernelBasis kernel_basis(const SynthesisOperator& syn, const Tolerances& tol = {});

// Kernel used by the shift diagnostics. When the family carries a reference lower bound A_ref,
// directions with sigma^2 <= theta * A_ref are admitted as well: a unit coefficient vector c with
// ||Uc||^2 <= theta * A_ref keeps at least (1 - theta) of its mass in the kernel of the untruncated
// synthesis operator. Without a reference bound this is the exact kernel.
KernelBasis diagnostic_kernel(const SynthesisOperator& syn, const Tolerances& tol = {});

ShiftResult right_shift(const CVector& c);
ShiftResult left_shift(const CVector& c);

// n x n matrix of the right (or left) shift on window coefficients, dropping the outgoing slot.
CMatrix shift_matrix(Eigen::Index n, ShiftDirection dir);

// Distance of the shifted kernel from the kernel. Measured on the interior kernel directions
// (edge mass <= eta) when there are any, as the operator norm of (I - P) S restricted to them;
// otherwise on the whole kernel and flagged untrusted.
ShiftDefect shift_invariance_defect(const KernelBasis& ker, ShiftDirection dir, const Tolerances& tol = {});

CMatrix gram(const FrameFamily& fam);
CMatrix frame_operator(const FrameFamily& fam);

}  // namespace fi
