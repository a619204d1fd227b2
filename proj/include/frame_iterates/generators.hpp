#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "frame_iterates/frames.hpp"

namespace fi {

enum class GeneratorKind {
    Fourier,           // f_k(x) = e^{2 pi i k x} sampled on [0,1)
    ShiftInvariant,    // integer-step translates of a band-limited profile on a circle
    Gabor,             // E_{m/3} T_n chi on a per-cell grid
    SincOversampled,   // translates T_{k/r} sinc
    RieszAppendix,     // {e_1} u {e_{k-1} + e_k / k}
    InterleavedOnb,    // standard basis and Fourier basis interleaved from index 0 upward
    OnbPlusDependent,  // orthonormal basis with alpha * sum 2^{-j} e_j inserted at index 0
    WeightedOnb,       // (1 + beta [k odd]) e_k: a Riesz basis whose operator is not unitary
};

enum class GaborOrdering { Lattice, Interleaved3 };

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Fourier;
    long k_min = -4;
    long k_max = 3;
    Eigen::Index ambient = 0;  // sample count M; 0 picks 4 * window length
    std::string label;

    // shift_invariant: "sinc", "sinc_half" (band [-1/4,1/4)), or "raised" (non-flat spectrum on [-1/4,1/4))
    std::string profile = "sinc";
    double step = 1.0;  // translation step a of the shift-invariant system

    int rate = 3;  // sinc_oversampled: translates by 1/rate

    GaborOrdering ordering = GaborOrdering::Lattice;
    int samples_per_unit = 0;  // Gabor grid points per unit cell; 0 picks the ordering default
    int cells = 16;            // Gabor time axis length in unit cells
    int class0_weight = 3;     // Gabor interleaved3: modulation weight in the odd-slot enumeration

    double alpha = 0.5;  // onb_plus_dependent coefficient, weighted_onb weight
    bool closed = false;  // riesz_appendix: project onto span{e_1..e_{n-1}} (excess 1)

    long window_length() const { return k_max - k_min + 1; }
};

// True for kinds indexed from 0 upward rather than by a symmetric window.
bool one_sided(GeneratorKind kind);

// Copy of spec with an N-element window: [-N/2, N/2 - 1], or [0, N - 1] for one-sided kinds.
GeneratorSpec with_window(GeneratorSpec spec, long n);

// Deterministic constructor; throws SpecError for invalid parameters.
FrameFamily generate(const GeneratorSpec& spec);

// T_shift phi in the discretization of a shift_invariant or sinc_oversampled spec, so that
// generate(spec).at(k) equals translated_generator(spec, k * step) (step 1 / rate for sinc).
CVector translated_generator(const GeneratorSpec& spec, double shift);

// Operator e_k -> f_k of the appendix family on its first n coordinates (upper bidiagonal).
CMatrix appendix_extension(long n);

// Multiplication by e^{2 pi i x} on the Fourier grid of generate(fourier).
CMatrix fourier_modulation(Eigen::Index m);

// Zig-zag enumeration 0, 1, -1, 2, -2, ... of the integers.
long zigzag(long j);

struct PhiProfile {
    std::vector<double> grid;    // gamma values in [0, 1)
    std::vector<double> values;  // Phi(gamma) >= 0
    double essential_inf_off_zero = 0.0;
    double essential_sup = 0.0;
    bool frame_sequence = false;
    bool riesz = false;
};

// Periodized spectrum of a profile sampled at x_j = j / samples_per_unit on an interval of integer
// length; the grid resolution is 1 / (interval length).
PhiProfile phi_profile(const CVector& samples, int samples_per_unit);

// Samples of a named profile on [0, length) with samples_per_unit points per unit.
CVector profile_samples(const std::string& profile, int length, int samples_per_unit);

std::string kind_name(GeneratorKind kind);
GeneratorKind parse_kind(const std::string& name);
nlohmann::ordered_json spec_to_json(const GeneratorSpec& spec);
GeneratorSpec spec_from_json(const nlohmann::json& j);

}  // namespace fi
