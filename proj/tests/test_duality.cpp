#include <cmath>

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

GeneratorSpec translates(const std::string& profile, long n) {
    GeneratorSpec s = spec_of(GeneratorKind::ShiftInvariant, n);
    s.profile = profile;
    return s;
}

// S^{-1} on the span through the pseudoinverse of the frame operator.
CMatrix frame_operator_pinv(const FrameFamily& f) { return pinv(f.vectors * f.vectors.adjoint()); }

}  // namespace

TEST_SUITE("duality") {

TEST_CASE("the canonical dual of a Parseval window is the window itself") {
    const FrameFamily fam = generate(spec_of(GeneratorKind::Fourier, 16));
    const DualFamily d = canonical_dual(fam, build_iterated(fam));
    CHECK((d.family.vectors - fam.vectors).norm() <= 1e-10);
    CHECK(d.provenance == "canonical");
    CHECK(d.reconstruction_residual <= 1e-12);
}

TEST_CASE("canonical dual of translates is again a translate family") {
    for (const char* profile : {"sinc", "sinc_half", "raised"}) {
        const FrameFamily fam = generate(translates(profile, 24));
        const IteratedRep rep = build_iterated(fam);
        const DualFamily d = canonical_dual(fam, rep);
        CAPTURE(profile);
        REQUIRE(d.iterated_form_residual);
        CHECK(*d.iterated_form_residual <= 1e-7);
        // Oracle: g_k = S^{-1} f_k directly, and a Toeplitz Gram for the dual.
        const CMatrix direct = frame_operator_pinv(fam) * fam.vectors;
        CHECK((d.family.vectors - direct).norm() <= 1e-8 * direct.norm());
        CHECK(toeplitz_unitarity_check(d.family, build_iterated(d.family)).toeplitz_defect <= 1e-8);
    }
}

TEST_CASE("appendix Riesz window: canonical dual is biorthogonal") {
    const FrameFamily fam = generate(spec_of(GeneratorKind::RieszAppendix, 8));
    const DualFamily d = canonical_dual(fam, build_iterated(fam));
    const CMatrix cross = d.family.vectors.adjoint() * fam.vectors;
    CHECK((cross - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("an ill-conditioned frame operator is refused") {
    // B / A = 1e14 with both singular values above the rank cutoff.
    CMatrix v = CMatrix::Zero(3, 2);
    v(0, 0) = 1.0;
    v(1, 1) = 1e-7;
    const FrameFamily fam = make_family("skewed", 0, v);
    CHECK(thrown_kind([&] { canonical_dual(fam, build_iterated(fam)); }) == ErrorKind::IllConditioned);
}

TEST_CASE("h0 = 0 reproduces the canonical dual") {
    for (const GeneratorSpec& s : {spec_of(GeneratorKind::SincOversampled, 24), translates("raised", 24),
                                   spec_of(GeneratorKind::WeightedOnb, 24), spec_of(GeneratorKind::Fourier, 24)}) {
        const FrameFamily fam = generate(s);
        const IteratedRep rep = build_iterated(fam);
        const DualFamily can = canonical_dual(fam, rep);
        const DualFamily h = dual_from_h0(fam, rep, CVector::Zero(fam.ambient_dim()));
        CAPTURE(fam.label);
        CHECK((h.family.vectors - can.family.vectors).norm() <= 1e-10 * can.family.vectors.norm());
    }
}

TEST_CASE("h0 = S^{-1} f_0 is a fixed point of the g_0 formula") {
    const FrameFamily fam = generate(spec_of(GeneratorKind::SincOversampled, 24));
    const IteratedRep rep = build_iterated(fam);
    const CVector g0 = frame_operator_pinv(fam) * fam.at(0);
    const DualFamily d = dual_from_h0(fam, rep, g0);
    CHECK((d.family.at(0) - g0).norm() <= 1e-10 * g0.norm());
}

TEST_CASE("random h0 duals reconstruct and their operator is (T*)^{-1}") {
    const FrameFamily fam = generate(spec_of(GeneratorKind::SincOversampled, 24));
    const IteratedRep rep = build_iterated(fam);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const DualFamily d = dual_from_h0(fam, rep, random_span_vector(fam, seed));
        CHECK(d.provenance == "h0_formula");
        CHECK(d.reconstruction_residual <= 1e-8);
        const UniquenessReport u = dual_operator_uniqueness(fam, rep, d);
        CHECK(u.applicable);
        CHECK(u.residual <= 1e-7);
    }
}

TEST_CASE("unitary T: the canonical dual's operator is T") {
    const FrameFamily fam = generate(translates("sinc", 16));
    const IteratedRep rep = build_iterated(fam);
    const DualFamily d = canonical_dual(fam, rep);
    const UniquenessReport u = dual_operator_uniqueness(fam, rep, d);
    CHECK(u.residual <= 1e-8);
    CHECK(std::abs(u.v_norm - 1.0) <= 1e-8);
    // The dual equals f here, so V built from it reproduces T itself.
    const IteratedRep v = build_iterated(d.family);
    CHECK(opnorm((v.op_matrix - rep.op_matrix) * rep.domain_basis) <= 1e-8);
}

TEST_CASE("zero-padded dual is dependent and has no representing operator") {
    const FrameFamily fam = generate(translates("sinc_half", 16));
    const Eigen::Index slot = -fam.k_min;
    CMatrix reduced(fam.ambient_dim(), fam.size() - 1);
    reduced << fam.vectors.leftCols(slot), fam.vectors.rightCols(fam.size() - slot - 1);
    const CMatrix rd = pinv(reduced).adjoint();
    CMatrix padded(fam.ambient_dim(), fam.size());
    padded << rd.leftCols(slot), CVector::Zero(fam.ambient_dim()), rd.rightCols(fam.size() - slot - 1);
    const DualFamily d = user_dual(fam, make_family("padded", fam.k_min, padded));
    CHECK(d.provenance == "user");
    CHECK(d.reconstruction_residual <= 1e-8);
    CHECK(!frame_bounds(d.family).linearly_independent);
    CHECK(!build_iterated(d.family).representable);
    CHECK(thrown_kind([&] { dual_operator_uniqueness(fam, build_iterated(fam), d); }) == ErrorKind::NotApplicable);
}

TEST_CASE("an unverified dual is not eligible for the uniqueness check") {
    const FrameFamily fam = generate(spec_of(GeneratorKind::SincOversampled, 12));
    const DualFamily d = user_dual(fam, fam);  // S = 3 I on the span, so f itself is not a dual
    CHECK(d.reconstruction_residual > 0.5);
    CHECK(thrown_kind([&] { dual_operator_uniqueness(fam, build_iterated(fam), d); }) == ErrorKind::NotApplicable);
}

TEST_CASE("dual_from_h0 needs an invertible T") {
    CMatrix v = CMatrix::Zero(4, 4);
    v(0, 0) = v(0, 1) = v(1, 2) = v(1, 3) = 1.0;
    const FrameFamily fam = make_family("pairs", -2, v);
    CHECK(thrown_kind([&] { dual_from_h0(fam, build_iterated(fam), CVector::Zero(4)); }) == ErrorKind::NotApplicable);
}

TEST_CASE("h0 is projected onto the span") {
    const FrameFamily fam = generate(translates("sinc_half", 16));
    const IteratedRep rep = build_iterated(fam);
    const CVector h = random_span_vector(fam, 3);
    const CMatrix q = range_basis(fam.vectors);
    CVector off = fi::test::random_matrix(fam.ambient_dim(), 1, 44);
    off -= q * (q.adjoint() * off);
    REQUIRE(off.norm() > 0.1);
    const DualFamily a = dual_from_h0(fam, rep, h);
    const DualFamily b = dual_from_h0(fam, rep, h + off);
    CHECK(!a.h0_projected);
    CHECK(b.h0_projected);
    CHECK((a.family.at(0) - b.family.at(0)).norm() <= 1e-12 * a.family.at(0).norm());
}

TEST_CASE("duality properties: symmetry, bilinear identity, double canonical dual") {
    for (const GeneratorSpec& s : {spec_of(GeneratorKind::SincOversampled, 24), translates("raised", 16),
                                   spec_of(GeneratorKind::WeightedOnb, 16)}) {
        const FrameFamily fam = generate(s);
        const IteratedRep rep = build_iterated(fam);
        const DualFamily can = canonical_dual(fam, rep);
        const DualFamily h0 = dual_from_h0(fam, rep, random_span_vector(fam, 9));
        CAPTURE(fam.label);
        for (const DualFamily* d : {&can, &h0}) {
            CHECK(reconstruction_residual(d->family, fam) <= 1e-8);
            for (std::uint64_t seed = 0; seed < 4; ++seed) {
                const CVector f = random_span_vector(fam, 100 + seed), h = random_span_vector(fam, 200 + seed);
                const Complex lhs = (fam.vectors.adjoint() * h).dot(d->family.vectors.adjoint() * f);
                CHECK(std::abs(lhs - h.dot(f)) <= 1e-8 * f.norm() * h.norm());
            }
        }
        const DualFamily back = canonical_dual(can.family, build_iterated(can.family));
        CHECK((back.family.vectors - fam.vectors).norm() <= 1e-8 * fam.vectors.norm());
    }
}

TEST_CASE("intertwining on an orthonormal shift") {
    CMatrix v = CMatrix::Zero(10, 8);
    for (Eigen::Index j = 0; j < 8; ++j) v(j, j) = 1.0;
    const FrameFamily fam = make_family("e", -4, v);
    const IntertwiningReport r = intertwining_check(fam, build_iterated(fam));
    CHECK(r.tu_residual <= 1e-14);
    CHECK(r.commutator <= 1e-14);
    CHECK(r.unitarity <= 1e-14);
    REQUIRE(r.tst_interior);
    CHECK(*r.tst_interior <= 1e-14);
    CHECK(r.biconditional_holds);
}

TEST_CASE("intertwining on translates and on a non-unitary Riesz family") {
    const FrameFamily sinc = generate(spec_of(GeneratorKind::SincOversampled, 24));
    const IntertwiningReport a = intertwining_check(sinc, build_iterated(sinc));
    CHECK(a.tu_residual <= 1e-8);
    CHECK(a.commutator <= 1e-8);
    CHECK(a.commutes);
    CHECK(a.unitary);
    CHECK(a.biconditional_holds);

    const FrameFamily skew = generate(spec_of(GeneratorKind::WeightedOnb, 16));
    const IntertwiningReport b = intertwining_check(skew, build_iterated(skew));
    CHECK(b.tu_residual <= 1e-8);
    CHECK(b.commutator > 1e-3);
    REQUIRE(b.tst_interior);
    CHECK(*b.tst_interior <= 1e-7);
    CHECK(!b.commutes);
    CHECK(!b.unitary);
    CHECK(b.biconditional_holds);
}

TEST_CASE("Toeplitz Gram and unitarity") {
    const FrameFamily fourier = generate(spec_of(GeneratorKind::Fourier, 16));
    const ToeplitzReport f = toeplitz_unitarity_check(fourier, build_iterated(fourier));
    CHECK(f.toeplitz);
    CHECK(f.checked);
    CHECK(f.unitary);
    CHECK(f.adjoint_shift_residual <= 1e-7);

    const FrameFamily tr = generate(translates("raised", 16));
    const ToeplitzReport t = toeplitz_unitarity_check(tr, build_iterated(tr));
    CHECK(t.toeplitz);
    CHECK(t.unitary);
    CHECK(t.unitarity <= 1e-7);

    GeneratorSpec g = spec_of(GeneratorKind::Gabor, 16);
    g.ordering = GaborOrdering::Interleaved3;
    const FrameFamily gab = generate(g);
    const ToeplitzReport r = toeplitz_unitarity_check(gab, build_iterated(gab));
    CHECK(!r.toeplitz);
    CHECK(!r.checked);
    CHECK(r.toeplitz_defect > 1e-8);
}

TEST_CASE("reconstruction residual probes are seeded") {
    const FrameFamily fam = generate(translates("raised", 16));
    const DualFamily d = canonical_dual(fam, build_iterated(fam));
    CHECK(reconstruction_residual(fam, d.family, 5) == reconstruction_residual(fam, d.family, 5));
    CHECK(random_span_vector(fam, 2) == random_span_vector(fam, 2));
    CHECK(random_span_vector(fam, 2) != random_span_vector(fam, 3));
}

}  // TEST_SUITE
