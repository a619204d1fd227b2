#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "frame_iterates/frames.hpp"
#include "frame_iterates/iteration.hpp"

namespace fi {

struct DualFamily {
    FrameFamily family;
    std::string provenance;  // "canonical", "h0_formula" or "user"
    CVector h0;              // the (projected) h0 for h0_formula duals
    bool h0_projected = false;
    double reconstruction_residual = 0.0;
    std::optional<double> iterated_form_residual;
    std::optional<double> uniqueness_residual;
};

inline constexpr std::uint64_t kProbeSeed = 20240601;

// Probe set: an orthonormal basis of span(f) plus 10 seeded random span vectors.
double reconstruction_residual(const FrameFamily& f, const FrameFamily& g, std::uint64_t seed = kProbeSeed);

// g_k = S^{-1} f_k from the pseudoinverse of U. Throws IllConditioned when B/A > 1e12. The iterated
// form g_k = (T*)^{-k} g_0 is measured when `rep` is invertible on the span.
DualFamily canonical_dual(const FrameFamily& fam, const IteratedRep& rep, const Tolerances& tol = {});

// Dual built from g_0 = S^{-1}f_0 + h_0 - sum_j <S^{-1}f_0, f_j> (T*)^{-j} h_0 over the window and
// g_k = (T*)^{-k} g_0. h_0 is projected onto span(f). Throws NotApplicable if T is not invertible.
DualFamily dual_from_h0(const FrameFamily& fam, const IteratedRep& rep, const CVector& h0,
                        const Tolerances& tol = {});

// Wraps a user-supplied family as a dual candidate and measures its reconstruction residual.
DualFamily user_dual(const FrameFamily& fam, const FrameFamily& candidate);

struct UniquenessReport {
    bool applicable = false;
    std::string reason;
    double residual = 0.0;  // ||V T* - I|| on span{g_k : k > k_min}
    double v_norm = 0.0;
};

// Represents the dual as {V^k g_0} and compares V with (T*)^{-1}. Throws NotApplicable when the
// dual admits no representing operator.
UniquenessReport dual_operator_uniqueness(const FrameFamily& fam, const IteratedRep& rep, const DualFamily& dual,
                                          const Tolerances& tol = {});

struct IntertwiningReport {
    double tu_residual = 0.0;            // ||(TU - U S_right) on interior coefficients|| / ||U||
    std::optional<double> tst_residual;  // ||TST* - S|| / ||S|| on the window
    std::optional<double> tst_interior;  // same, compressed off span{f_kmin, T f_kmax}
    double commutator = 0.0;             // ||(ST - TS) on the domain|| / ||S||
    double unitarity = 0.0;              // ||(TQ)*(TQ) - I||, Q the domain basis
    bool commutes = false;
    bool unitary = false;
    bool biconditional_holds = false;
};

IntertwiningReport intertwining_check(const FrameFamily& fam, const IteratedRep& rep, const Tolerances& tol = {});

struct ToeplitzReport {
    double toeplitz_defect = 0.0;  // max deviation along Gram diagonals, relative to max |G|
    bool toeplitz = false;
    bool checked = false;
    double adjoint_shift_residual = 0.0;  // max_k ||T* f_k - f_{k-1}|| / ||f_k|| for k > k_min
    double unitarity = 0.0;
    bool unitary = false;
};

ToeplitzReport toeplitz_unitarity_check(const FrameFamily& fam, const IteratedRep& rep);

// Seeded complex Gaussian vector in span(fam).
CVector random_span_vector(const FrameFamily& fam, std::uint64_t seed);

}  // namespace fi
