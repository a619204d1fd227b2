#include <cmath>
#include <cstring>

#include "frame_iterates/duality.hpp"
#include "frame_iterates/generators.hpp"
#include "frame_iterates/iteration.hpp"
#include "helpers.hpp"

using namespace fi;
using fi::test::thrown_kind;

namespace {

GeneratorSpec spec_of(GeneratorKind kind, long n) {
    GeneratorSpec s;
    s.kind = kind;
    return with_window(s, n);
}

double gram_offdiag(const CMatrix& v) {
    CMatrix g = v.adjoint() * v;
    g.diagonal().setZero();
    return g.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("generators") {

TEST_CASE("Fourier window -8..7 on 64 samples is pairwise orthogonal") {
    GeneratorSpec s;
    s.kind = GeneratorKind::Fourier;
    s.k_min = -8;
    s.k_max = 7;
    s.ambient = 64;
    const FrameFamily fam = generate(s);
    CHECK(fam.size() == 16);
    CHECK(fam.ambient_dim() == 64);
    CHECK(gram_offdiag(fam.vectors) <= 1e-10);
    for (Eigen::Index j = 0; j < fam.size(); ++j) CHECK(std::abs(fam.vectors.col(j).norm() - 1.0) <= 1e-12);
}

TEST_CASE("ambient dimension below 4 x window length is rejected") {
    GeneratorSpec s = spec_of(GeneratorKind::Fourier, 16);
    s.ambient = 63;
    CHECK(thrown_kind([&] { generate(s); }) == ErrorKind::SpecError);
}

TEST_CASE("invalid parameters raise SpecError") {
    GeneratorSpec s = spec_of(GeneratorKind::SincOversampled, 12);
    s.rate = 4;
    CHECK(thrown_kind([&] { generate(s); }) == ErrorKind::SpecError);
    GeneratorSpec p = spec_of(GeneratorKind::ShiftInvariant, 8);
    p.profile = "gaussian";
    CHECK(thrown_kind([&] { generate(p); }) == ErrorKind::SpecError);
    p.profile = "sinc";
    p.step = -1.0;
    CHECK(thrown_kind([&] { generate(p); }) == ErrorKind::SpecError);
    GeneratorSpec a = spec_of(GeneratorKind::RieszAppendix, 8);
    a.k_min = -1;
    CHECK(thrown_kind([&] { generate(a); }) == ErrorKind::SpecError);
    CHECK(thrown_kind([] { with_window(GeneratorSpec{}, 1); }) == ErrorKind::SpecError);
    CHECK(thrown_kind([] { parse_kind("wavelet"); }) == ErrorKind::SpecError);
}

TEST_CASE("three-fold oversampled sinc is a tight frame sequence") {
    for (long n : {12L, 24L, 48L}) {
        const FrameDiagnostics d = frame_bounds(generate(spec_of(GeneratorKind::SincOversampled, n)));
        CAPTURE(n);
        CHECK(d.upper_bound_B / d.lower_bound_A - 1.0 <= 1e-3);
        CHECK(std::abs(d.lower_bound_A - 3.0) <= 1e-8);
        CHECK(d.excess == n - n / 3);
    }
}

TEST_CASE("appendix window up to k = 8") {
    GeneratorSpec s = spec_of(GeneratorKind::RieszAppendix, 8);
    const FrameFamily open = generate(s);
    CHECK(frame_bounds(open).excess == 0);
    CHECK(open.at(0) == fi::test::unit(open.ambient_dim(), 0));
    // Slot j holds element j + 1 of {e_1} u {e_{k-1} + e_k / k}: slot 3 is e_3 + e_4 / 4.
    CHECK(std::abs(open.at(3)(2) - 1.0) <= 1e-15);
    CHECK(std::abs(open.at(3)(3) - 0.25) <= 1e-15);
    CHECK(open.at(3).norm() == doctest::Approx(std::sqrt(1.0 + 1.0 / 16.0)));
    s.closed = true;
    const FrameDiagnostics d = frame_bounds(generate(s));
    CHECK(d.excess == 1);
    CHECK(d.lower_bound_A > 0.0);
}

TEST_CASE("Phi of sinc is identically 1 and the profile is Riesz") {
    const PhiProfile p = phi_profile(profile_samples("sinc", 16, 8), 8);
    REQUIRE(p.values.size() == 16);
    for (double v : p.values) CHECK(std::abs(v - 1.0) <= 1e-10);
    CHECK(p.riesz);
    CHECK(p.frame_sequence);
    CHECK(p.grid.front() == 0.0);
    CHECK(p.grid.back() < 1.0);
}

TEST_CASE("Phi of the half-band sinc vanishes on half of the grid") {
    const PhiProfile p = phi_profile(profile_samples("sinc_half", 16, 8), 8);
    std::size_t zeros = 0;
    for (double v : p.values) {
        CHECK(v >= 0.0);
        if (v <= 1e-10) ++zeros;
        else CHECK(std::abs(v - 1.0) <= 1e-10);
    }
    CHECK(zeros == 8);
    CHECK(p.frame_sequence);
    CHECK(!p.riesz);
}

TEST_CASE("raised profile: non-flat band on half the grid") {
    const PhiProfile p = phi_profile(profile_samples("raised", 16, 8), 8);
    CHECK(p.frame_sequence);
    CHECK(!p.riesz);
    CHECK(p.essential_sup / p.essential_inf_off_zero > 1.5);
}

TEST_CASE("phi = 0 is degenerate") {
    CHECK(thrown_kind([] { phi_profile(CVector::Zero(32), 8); }) == ErrorKind::DegenerateFamily);
}

TEST_CASE("generators are deterministic") {
    std::vector<GeneratorSpec> specs;
    for (GeneratorKind k : {GeneratorKind::Fourier, GeneratorKind::ShiftInvariant, GeneratorKind::Gabor,
                            GeneratorKind::SincOversampled, GeneratorKind::RieszAppendix, GeneratorKind::InterleavedOnb,
                            GeneratorKind::OnbPlusDependent, GeneratorKind::WeightedOnb})
        specs.push_back(spec_of(k, 12));
    specs[2].ordering = GaborOrdering::Interleaved3;
    for (const GeneratorSpec& s : specs) {
        const FrameFamily a = generate(s), b = generate(s);
        CAPTURE(kind_name(s.kind));
        CHECK(a.vectors.size() == b.vectors.size());
        CHECK(std::memcmp(a.vectors.data(), b.vectors.data(), sizeof(Complex) * a.vectors.size()) == 0);
        CHECK(a.label == b.label);
    }
}

TEST_CASE("reordered Gabor: odd slots form an orthonormal system") {
    for (long n : {16L, 32L, 64L}) {
        GeneratorSpec s = spec_of(GeneratorKind::Gabor, n);
        s.ordering = GaborOrdering::Interleaved3;
        const FrameFamily fam = generate(s);
        std::vector<Eigen::Index> odd;
        for (long k = fam.k_min; k <= fam.k_max; ++k)
            if (k % 2 != 0) odd.push_back(k - fam.k_min);
        CMatrix sub(fam.ambient_dim(), static_cast<Eigen::Index>(odd.size()));
        for (std::size_t i = 0; i < odd.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = fam.vectors.col(odd[i]);
        CHECK((sub.adjoint() * sub - CMatrix::Identity(sub.cols(), sub.cols())).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("lattice Gabor window is one full modulation period for every N") {
    for (long n : {8L, 12L, 16L, 32L}) {
        const FrameFamily fam = generate(spec_of(GeneratorKind::Gabor, n));
        const FrameDiagnostics d = frame_bounds(fam);
        CAPTURE(n);
        CHECK(d.tight);
        CHECK(d.rank == (n + 2) / 3);
        // E_{k/3} chi at x_j = 3j/N is e^{2 pi i k j / N} times the grid weight sqrt(3/N).
        CHECK(std::abs(fam.at(1)(1) - std::polar(std::sqrt(3.0 / n), 2.0 * M_PI / n)) <= 1e-14);
        CHECK(toeplitz_unitarity_check(fam, build_iterated(fam)).toeplitz_defect <= 1e-8);
    }
}

TEST_CASE("translate families have Toeplitz Gram matrices") {
    for (const char* profile : {"sinc", "sinc_half", "raised"}) {
        GeneratorSpec s = spec_of(GeneratorKind::ShiftInvariant, 16);
        s.profile = profile;
        const FrameFamily fam = generate(s);
        const ToeplitzReport r = toeplitz_unitarity_check(fam, build_iterated(fam));
        CAPTURE(profile);
        CHECK(r.toeplitz_defect <= 1e-8);
    }
    const FrameFamily sinc3 = generate(spec_of(GeneratorKind::SincOversampled, 24));
    CHECK(toeplitz_unitarity_check(sinc3, build_iterated(sinc3)).toeplitz_defect <= 1e-8);
}

TEST_CASE("translated_generator agrees with the generated translates") {
    GeneratorSpec s = spec_of(GeneratorKind::ShiftInvariant, 12);
    s.profile = "raised";
    s.step = 1.0;
    const FrameFamily fam = generate(s);
    for (long k = fam.k_min; k <= fam.k_max; ++k) CHECK((fam.at(k) - translated_generator(s, k * s.step)).norm() <= 1e-12);
    const GeneratorSpec r = spec_of(GeneratorKind::SincOversampled, 12);
    const FrameFamily f3 = generate(r);
    for (long k = f3.k_min; k <= f3.k_max; ++k) CHECK((f3.at(k) - translated_generator(r, k / 3.0)).norm() <= 1e-12);
    CHECK(thrown_kind([] { translated_generator(spec_of(GeneratorKind::Fourier, 8), 0.5); }) == ErrorKind::SpecError);
}

TEST_CASE("interleaved bases are linearly independent on every window") {
    for (long n : {8L, 16L, 32L, 64L}) CHECK(frame_bounds(generate(spec_of(GeneratorKind::InterleavedOnb, n))).excess == 0);
}

TEST_CASE("orthonormal basis with an inserted dependent vector") {
    GeneratorSpec s = spec_of(GeneratorKind::OnbPlusDependent, 8);
    s.alpha = 0.5;
    const FrameFamily fam = generate(s);
    // Inserted vector alpha * sum_{j=1}^{k_max - 1} 2^{-j} e_{coord(j)}.
    double expect = 0.0;
    for (long j = 1; j <= s.k_max - 1; ++j) expect += 0.25 * std::pow(4.0, -static_cast<double>(j));
    CHECK(std::abs(fam.at(0).norm() - std::sqrt(expect)) <= 1e-14);
    const FrameDiagnostics d = frame_bounds(fam);
    CHECK(d.excess == 1);
    CHECK(std::abs(d.lower_bound_A - 1.0) <= 1e-8);
}

TEST_CASE("weighted basis is Riesz and not tight") {
    const FrameDiagnostics d = frame_bounds(generate(spec_of(GeneratorKind::WeightedOnb, 8)));
    CHECK(d.excess == 0);
    CHECK(std::abs(d.lower_bound_A - 1.0) <= 1e-12);
    CHECK(std::abs(d.upper_bound_B - 2.25) <= 1e-12);
    CHECK(!d.tight);
}

TEST_CASE("windows and enumeration helpers") {
    const GeneratorSpec sym = spec_of(GeneratorKind::Fourier, 8);
    CHECK(sym.k_min == -4);
    CHECK(sym.k_max == 3);
    const GeneratorSpec one = spec_of(GeneratorKind::InterleavedOnb, 8);
    CHECK(one.k_min == 0);
    CHECK(one.k_max == 7);
    const std::vector<long> expect = {0, 1, -1, 2, -2, 3};
    for (long j = 0; j < 6; ++j) CHECK(zigzag(j) == expect[j]);
}

TEST_CASE("fourier_modulation is multiplication by e^{2 pi i x}") {
    const CMatrix m = fourier_modulation(16);
    for (Eigen::Index j = 0; j < 16; ++j) CHECK(std::abs(m(j, j) - std::polar(1.0, 2.0 * M_PI * j / 16.0)) <= 1e-14);
    CHECK((m - CMatrix(m.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("spec JSON round trip") {
    GeneratorSpec s = spec_of(GeneratorKind::Gabor, 16);
    s.ordering = GaborOrdering::Interleaved3;
    s.label = "g";
    const GeneratorSpec t = spec_from_json(spec_to_json(s));
    CHECK(t.kind == s.kind);
    CHECK(t.k_min == s.k_min);
    CHECK(t.k_max == s.k_max);
    CHECK(t.ordering == s.ordering);
    CHECK(t.label == s.label);
    CHECK((generate(t).vectors - generate(s).vectors).norm() == 0.0);

    GeneratorSpec d = spec_of(GeneratorKind::OnbPlusDependent, 12);
    d.alpha = 0.25;
    CHECK(spec_from_json(spec_to_json(d)).alpha == 0.25);
}

}  // TEST_SUITE
