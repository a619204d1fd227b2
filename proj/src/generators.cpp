#include "frame_iterates/generators.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "frame_iterates/errors.hpp"

namespace fi {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Complex cis(double angle) { return {std::cos(angle), std::sin(angle)}; }

[[noreturn]] void spec_error(const std::string& what) { throw Error(ErrorKind::SpecError, what); }

// Spectral weights of a named profile at frequency xi (continuous Fourier normalization).
double profile_weight(const std::string& profile, double xi) {
    if (profile == "sinc") return (xi >= -0.5 && xi < 0.5) ? 1.0 : 0.0;
    if (profile == "sinc_half") return (xi >= -0.25 && xi < 0.25) ? 1.0 : 0.0;
    if (profile == "raised") return (xi >= -0.25 && xi < 0.25) ? 1.0 + 0.5 * std::cos(2.0 * kTwoPi * xi) : 0.0;
    spec_error("unknown profile '" + profile + "'");
}

// Frequencies m / length of the circle model that fall inside [-1/2, 1/2).
std::vector<long> band(double length) {
    std::vector<long> ms;
    const long lo = static_cast<long>(std::ceil(-0.5 * length));
    for (long m = lo; static_cast<double>(m) < 0.5 * length; ++m) ms.push_back(m);
    return ms;
}

// Samples sqrt(h) * phi(x_j - shift) on x_j = j * length / M, where phi is the band-limited
// periodic function with spectrum profile_weight on the circle of the given length.
CVector circle_translate(const std::string& profile, double length, Eigen::Index m_samples, double shift) {
    const double h = length / static_cast<double>(m_samples);
    CVector v = CVector::Zero(m_samples);
    for (long m : band(length)) {
        const double w = profile_weight(profile, static_cast<double>(m) / length);
        if (w == 0.0) continue;
        const Complex coeff = w / length * cis(-kTwoPi * static_cast<double>(m) * shift / length);
        for (Eigen::Index j = 0; j < m_samples; ++j)
            v(j) += coeff * cis(kTwoPi * static_cast<double>(m) * static_cast<double>(j) * h / length);
    }
    return std::sqrt(h) * v;
}

Eigen::Index ambient_for(const GeneratorSpec& spec) {
    const Eigen::Index n = spec.window_length();
    const Eigen::Index m = spec.ambient > 0 ? spec.ambient : 4 * n;
    if (m < 4 * n)
        spec_error("ambient dimension " + std::to_string(m) + " is below 4 x window length " + std::to_string(n));
    return m;
}

FrameFamily finish(const GeneratorSpec& spec, const std::string& fallback, CMatrix vectors) {
    FrameFamily fam = make_family(spec.label.empty() ? fallback : spec.label, spec.k_min, std::move(vectors));
    fam.validate();
    return fam;
}

FrameFamily gen_fourier(const GeneratorSpec& spec) {
    const Eigen::Index m = ambient_for(spec);
    CMatrix v(m, spec.window_length());
    for (long k = spec.k_min; k <= spec.k_max; ++k)
        for (Eigen::Index j = 0; j < m; ++j)
            v(j, k - spec.k_min) = cis(kTwoPi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(m)) /
                                   std::sqrt(static_cast<double>(m));
    return finish(spec, "fourier", std::move(v));
}

// Translates T_{k * step} phi on a circle whose length makes the window exactly one period.
FrameFamily gen_translates(const GeneratorSpec& spec, const std::string& profile, double step,
                           const std::string& fallback) {
    if (step <= 0.0) spec_error("translation step must be positive");
    const Eigen::Index m = ambient_for(spec);
    const double length = step * static_cast<double>(spec.window_length());
    CMatrix v(m, spec.window_length());
    for (long k = spec.k_min; k <= spec.k_max; ++k)
        v.col(k - spec.k_min) = circle_translate(profile, length, m, static_cast<double>(k) * step);
    return finish(spec, fallback, std::move(v));
}

// (m, n) lattice points sorted by a key, ties broken by |m|, m, |n|, n.
std::vector<std::pair<long, long>> enumerate_lattice(long count, long radius,
                                                     long (*key)(long, long, long), long weight) {
    std::vector<std::tuple<long, long, long, long, long>> pts;
    for (long m = -radius; m <= radius; ++m)
        for (long n = -radius; n <= radius; ++n)
            pts.emplace_back(key(m, n, weight), std::labs(m), m, std::labs(n), n);
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<long, long>> out;
    for (long i = 0; i < count && i < static_cast<long>(pts.size()); ++i)
        out.emplace_back(std::get<2>(pts[i]), std::get<4>(pts[i]));
    return out;
}

long square_key(long m, long n, long weight) { return std::max(weight * std::labs(m), std::labs(n)); }
long diagonal_key(long m, long n, long) { return std::labs(m) + std::labs(n); }

// E_{q/3} T_n chi sampled on cell n of a time axis of `cells` unit cells, s points per cell.
CVector gabor_atom(long q, long n, int s, int cells) {
    const long offset = (n + cells / 2) * s;
    if (offset < 0 || offset + s > static_cast<long>(s) * cells)
        spec_error("Gabor atom at cell " + std::to_string(n) + " falls outside the time axis");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(s) * cells);
    for (int j = 0; j < s; ++j) {
        const double t = static_cast<double>(n) + static_cast<double>(j) / s;
        v(offset + j) = cis(kTwoPi * static_cast<double>(q) / 3.0 * t) / std::sqrt(static_cast<double>(s));
    }
    return v;
}

FrameFamily gen_gabor(const GeneratorSpec& spec) {
    const long n = spec.window_length();
    if (spec.cells < 1) spec_error("Gabor time axis needs at least one cell");
    CMatrix v;
    FrameFamily fam;
    if (spec.ordering == GaborOrdering::Lattice) {
        // Modulation orbit {E_{k/3} chi}: a frame sequence with T = E_{1/3}.
        if (spec.samples_per_unit > 0) {
            const int s = spec.samples_per_unit;
            const int cells = std::max(spec.cells, static_cast<int>((4 * n + s - 1) / s));
            v.resize(static_cast<Eigen::Index>(s) * cells, n);
            for (long k = spec.k_min; k <= spec.k_max; ++k) v.col(k - spec.k_min) = gabor_atom(k, 0, s, cells);
        } else {
            // Grid spacing 3/N puts chi on the points x_j = 3j/N < 1, so E_{k/3} chi(x_j) = e^{2 pi i k j / N}
            // and the window is exactly one period of the orbit for every N.
            const Eigen::Index support = (n + 2) / 3;
            const Eigen::Index m = std::max<Eigen::Index>(4 * n, support * spec.cells);
            const double h = 3.0 / static_cast<double>(n);
            v = CMatrix::Zero(m, n);
            for (long k = spec.k_min; k <= spec.k_max; ++k)
                for (Eigen::Index j = 0; j < support; ++j)
                    v(j, k - spec.k_min) = cis(kTwoPi * static_cast<double>((k * j) % n) / static_cast<double>(n)) * std::sqrt(h);
        }
        fam = finish(spec, "gabor-lattice", std::move(v));
    } else {
        // Odd slots carry the orthonormal basis {E_m T_n chi}; even slots alternate between the
        // classes q = 1 and q = 2 mod 3, each walked in diagonal order.
        const int s = spec.samples_per_unit > 0 ? spec.samples_per_unit : 32;
        const int cells = spec.cells;
        if (static_cast<Eigen::Index>(s) * cells < 4 * n)
            spec_error("Gabor time axis of " + std::to_string(s * cells) + " samples is below 4 x window length");
        const long radius = 2 * n + 2;
        const auto onb = enumerate_lattice(n, radius, square_key, spec.class0_weight);
        const auto rest = enumerate_lattice(n, radius, diagonal_key, 0);
        v.resize(static_cast<Eigen::Index>(s) * cells, n);
        auto slot = [](long j) { return j >= 0 ? 2 * j : -2 * j - 1; };
        for (long k = spec.k_min; k <= spec.k_max; ++k) {
            CVector atom;
            if (k % 2 != 0) {
                const auto [m, t] = onb[slot((k - 1) / 2)];
                atom = gabor_atom(3 * m, t, s, cells);
            } else {
                const long jj = slot(k / 2);
                const long cls = 1 + jj % 2;
                const auto [m, t] = rest[jj / 2];
                atom = gabor_atom(3 * m + cls, t, s, cells);
            }
            v.col(k - spec.k_min) = atom;
        }
        fam = finish(spec, "gabor-interleaved3", std::move(v));
        fam.reference_lower_bound = 3.0;
    }
    return fam;
}

FrameFamily gen_sinc(const GeneratorSpec& spec) {
    if (spec.rate < 1 || spec.rate > 3) spec_error("sinc_oversampled rate must be 1, 2 or 3");
    FrameFamily fam = gen_translates(spec, "sinc", 1.0 / spec.rate, "sinc-oversampled-" + std::to_string(spec.rate));
    fam.reference_lower_bound = static_cast<double>(spec.rate);
    return fam;
}

FrameFamily gen_appendix(const GeneratorSpec& spec) {
    if (spec.k_min != 0) spec_error("riesz_appendix is indexed from 0");
    const long n = spec.window_length();
    const Eigen::Index m = ambient_for(spec);
    CMatrix v = CMatrix::Zero(m, n);
    v.topRows(n) = appendix_extension(n);
    if (spec.closed) v.row(n - 1).setZero();
    return finish(spec, spec.closed ? "riesz-appendix-closed" : "riesz-appendix", std::move(v));
}

FrameFamily gen_interleaved(const GeneratorSpec& spec) {
    if (spec.k_min != 0) spec_error("interleaved_onb is indexed from 0");
    const Eigen::Index m = ambient_for(spec);
    CMatrix v = CMatrix::Zero(m, spec.window_length());
    for (long k = 0; k <= spec.k_max; ++k) {
        const long p = ((zigzag(k / 2) % m) + m) % m;
        if (k % 2 == 0) {
            v(p, k) = 1.0;
        } else {
            for (Eigen::Index j = 0; j < m; ++j)
                v(j, k) = cis(kTwoPi * static_cast<double>(p * j % m) / static_cast<double>(m)) /
                          std::sqrt(static_cast<double>(m));
        }
    }
    FrameFamily fam = finish(spec, "interleaved-onb", std::move(v));
    fam.reference_lower_bound = 2.0;
    return fam;
}

FrameFamily gen_onb_plus_dependent(const GeneratorSpec& spec) {
    if (spec.k_max < 2) spec_error("onb_plus_dependent needs k_max >= 2");
    const Eigen::Index m = ambient_for(spec);
    CMatrix v = CMatrix::Zero(m, spec.window_length());
    // e_j for j in [k_min, k_max - 1] occupies coordinate j - k_min.
    auto coord = [&](long j) { return static_cast<Eigen::Index>(j - spec.k_min); };
    for (long k = spec.k_min; k <= spec.k_max; ++k) {
        if (k < 0) v(coord(k), k - spec.k_min) = 1.0;
        if (k > 0) v(coord(k - 1), k - spec.k_min) = 1.0;
    }
    for (long j = 1; j <= spec.k_max - 1; ++j) v(coord(j), -spec.k_min) = spec.alpha * std::ldexp(1.0, -static_cast<int>(j));
    return finish(spec, "onb-plus-dependent", std::move(v));
}

FrameFamily gen_weighted(const GeneratorSpec& spec) {
    const Eigen::Index m = ambient_for(spec);
    CMatrix v = CMatrix::Zero(m, spec.window_length());
    for (long k = spec.k_min; k <= spec.k_max; ++k)
        v(k - spec.k_min, k - spec.k_min) = (k % 2 != 0) ? 1.0 + spec.alpha : 1.0;
    FrameFamily fam = finish(spec, "weighted-onb", std::move(v));
    return fam;
}

}  // namespace

long zigzag(long j) { return (j % 2 != 0) ? (j + 1) / 2 : -(j / 2); }

bool one_sided(GeneratorKind kind) {
    return kind == GeneratorKind::RieszAppendix || kind == GeneratorKind::InterleavedOnb;
}

GeneratorSpec with_window(GeneratorSpec spec, long n) {
    if (n < 2) spec_error("window length must be at least 2");
    if (one_sided(spec.kind)) {
        spec.k_min = 0;
        spec.k_max = n - 1;
    } else {
        spec.k_min = -(n / 2);
        spec.k_max = spec.k_min + n - 1;
    }
    return spec;
}

FrameFamily generate(const GeneratorSpec& spec) {
    if (spec.k_min > 0 || spec.k_max < 0 || spec.k_max < spec.k_min)
        spec_error("window [" + std::to_string(spec.k_min) + ", " + std::to_string(spec.k_max) + "] must contain 0");
    switch (spec.kind) {
        case GeneratorKind::Fourier: return gen_fourier(spec);
        case GeneratorKind::ShiftInvariant: return gen_translates(spec, spec.profile, spec.step, "shift-invariant-" + spec.profile);
        case GeneratorKind::Gabor: return gen_gabor(spec);
        case GeneratorKind::SincOversampled: return gen_sinc(spec);
        case GeneratorKind::RieszAppendix: return gen_appendix(spec);
        case GeneratorKind::InterleavedOnb: return gen_interleaved(spec);
        case GeneratorKind::OnbPlusDependent: return gen_onb_plus_dependent(spec);
        case GeneratorKind::WeightedOnb: return gen_weighted(spec);
    }
    spec_error("unknown generator kind");
}

CVector translated_generator(const GeneratorSpec& spec, double shift) {
    const double length = static_cast<double>(spec.window_length());
    switch (spec.kind) {
        case GeneratorKind::ShiftInvariant:
            if (spec.step <= 0.0) spec_error("translation step must be positive");
            return circle_translate(spec.profile, spec.step * length, ambient_for(spec), shift);
        case GeneratorKind::SincOversampled:
            if (spec.rate < 1 || spec.rate > 3) spec_error("sinc_oversampled rate must be 1, 2 or 3");
            return circle_translate("sinc", length / spec.rate, ambient_for(spec), shift);
        default: spec_error("translated_generator needs a shift_invariant or sinc_oversampled spec");
    }
}

CMatrix appendix_extension(long n) {
    CMatrix a = CMatrix::Zero(n, n);
    a(0, 0) = 1.0;
    for (long k = 2; k <= n; ++k) {
        a(k - 2, k - 1) = 1.0;
        a(k - 1, k - 1) = 1.0 / static_cast<double>(k);
    }
    return a;
}

CMatrix fourier_modulation(Eigen::Index m) {
    CMatrix d = CMatrix::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) d(j, j) = cis(kTwoPi * static_cast<double>(j) / static_cast<double>(m));
    return d;
}

PhiProfile phi_profile(const CVector& samples, int samples_per_unit) {
    const Eigen::Index p = samples.size();
    if (samples_per_unit <= 0 || p == 0 || p % samples_per_unit != 0)
        spec_error("phi_profile needs an interval of integer length");
    if (samples.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorKind::DegenerateFamily, "phi_profile: phi = 0");
    const long length = p / samples_per_unit;
    const double h = 1.0 / samples_per_unit;
    PhiProfile out;
    out.grid.resize(length);
    out.values.assign(length, 0.0);
    for (long i = 0; i < length; ++i) out.grid[i] = static_cast<double>(i) / static_cast<double>(length);
    // phi_hat(l / length) = h * sum_j phi(x_j) e^{-2 pi i l j / p}; l runs over [-p/2, p/2).
    for (Eigen::Index l = -(p / 2); l < p - p / 2; ++l) {
        Complex acc = 0.0;
        for (Eigen::Index j = 0; j < p; ++j)
            acc += samples(j) * cis(-kTwoPi * static_cast<double>((l * j) % p) / static_cast<double>(p));
        const long bin = ((l % length) + length) % length;
        out.values[bin] += std::norm(h * acc);
    }
    const double peak = *std::max_element(out.values.begin(), out.values.end());
    const double cutoff = 1e-10 * peak;
    out.essential_sup = peak;
    out.essential_inf_off_zero = peak;
    bool has_zero = false;
    for (double v : out.values) {
        if (v <= cutoff)
            has_zero = true;
        else
            out.essential_inf_off_zero = std::min(out.essential_inf_off_zero, v);
    }
    out.frame_sequence = out.essential_inf_off_zero > 0.0;
    out.riesz = !has_zero;
    return out;
}

CVector profile_samples(const std::string& profile, int length, int samples_per_unit) {
    if (length <= 0 || samples_per_unit <= 0) spec_error("profile_samples needs positive sizes");
    const Eigen::Index p = static_cast<Eigen::Index>(length) * samples_per_unit;
    // circle_translate carries the sqrt(h) weight of the discrete inner product; phi itself does not.
    return circle_translate(profile, static_cast<double>(length), p, 0.0) /
           std::sqrt(static_cast<double>(length) / static_cast<double>(p));
}

std::string kind_name(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Fourier: return "fourier";
        case GeneratorKind::ShiftInvariant: return "shift_invariant";
        case GeneratorKind::Gabor: return "gabor";
        case GeneratorKind::SincOversampled: return "sinc_oversampled";
        case GeneratorKind::RieszAppendix: return "riesz_appendix";
        case GeneratorKind::InterleavedOnb: return "interleaved_onb";
        case GeneratorKind::OnbPlusDependent: return "onb_plus_dependent";
        case GeneratorKind::WeightedOnb: return "weighted_onb";
    }
    return "unknown";
}

GeneratorKind parse_kind(const std::string& name) {
    for (auto k : {GeneratorKind::Fourier, GeneratorKind::ShiftInvariant, GeneratorKind::Gabor,
                   GeneratorKind::SincOversampled, GeneratorKind::RieszAppendix, GeneratorKind::InterleavedOnb,
                   GeneratorKind::OnbPlusDependent, GeneratorKind::WeightedOnb})
        if (kind_name(k) == name) return k;
    spec_error("unknown generator kind '" + name + "'");
}

nlohmann::ordered_json spec_to_json(const GeneratorSpec& spec) {
    nlohmann::ordered_json j;
    j["kind"] = kind_name(spec.kind);
    j["window"] = {spec.k_min, spec.k_max};
    j["ambient"] = spec.ambient;
    if (!spec.label.empty()) j["label"] = spec.label;
    switch (spec.kind) {
        case GeneratorKind::ShiftInvariant:
            j["profile"] = spec.profile;
            j["step"] = spec.step;
            break;
        case GeneratorKind::Gabor:
            j["ordering"] = spec.ordering == GaborOrdering::Lattice ? "lattice" : "interleaved3";
            j["samples_per_unit"] = spec.samples_per_unit;
            j["cells"] = spec.cells;
            j["class0_weight"] = spec.class0_weight;
            break;
        case GeneratorKind::SincOversampled: j["rate"] = spec.rate; break;
        case GeneratorKind::RieszAppendix: j["closed"] = spec.closed; break;
        case GeneratorKind::OnbPlusDependent:
        case GeneratorKind::WeightedOnb: j["alpha"] = spec.alpha; break;
        default: break;
    }
    return j;
}

GeneratorSpec spec_from_json(const nlohmann::json& j) {
    GeneratorSpec spec;
    try {
        spec.kind = parse_kind(j.at("kind").get<std::string>());
        if (j.contains("window")) {
            const auto& w = j.at("window");
            if (w.is_array()) {
                spec.k_min = w.at(0).get<long>();
                spec.k_max = w.at(1).get<long>();
            } else {
                spec = with_window(spec, w.get<long>());
            }
        } else {
            spec = with_window(spec, 8);
        }
        spec.ambient = j.value("ambient", Eigen::Index{0});
        spec.label = j.value("label", std::string{});
        spec.profile = j.value("profile", spec.profile);
        spec.step = j.value("step", spec.step);
        spec.rate = j.value("rate", spec.rate);
        const std::string ordering = j.value("ordering", std::string("lattice"));
        if (ordering == "lattice")
            spec.ordering = GaborOrdering::Lattice;
        else if (ordering == "interleaved3")
            spec.ordering = GaborOrdering::Interleaved3;
        else
            spec_error("unknown Gabor ordering '" + ordering + "'");
        spec.samples_per_unit = j.value("samples_per_unit", spec.samples_per_unit);
        spec.cells = j.value("cells", spec.cells);
        spec.class0_weight = j.value("class0_weight", spec.class0_weight);
        spec.alpha = j.value("alpha", spec.alpha);
        spec.closed = j.value("closed", spec.closed);
    } catch (const nlohmann::json::exception& e) {
        spec_error(std::string("malformed generator spec: ") + e.what());
    }
    return spec;
}

}  // namespace fi
