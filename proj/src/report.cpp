#include "frame_iterates/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

#include "frame_iterates/errors.hpp"

namespace fi {

Json number(double x) {
    if (std::isnan(x)) return "NaN";
    if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
    return x;
}

double number_from_json(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
        if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    }
    throw Error(ErrorKind::ParseError, "expected a number, got " + j.dump());
}

namespace {

template <class T>
Json optional_number(const std::optional<T>& v) {
    return v ? number(static_cast<double>(*v)) : Json(nullptr);
}

Json optional_verdict(const std::optional<Verdict>& v) { return v ? Json(verdict_name(*v)) : Json(nullptr); }

Json vector_to_json(const CVector& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(Json::array({number(v(i).real()), number(v(i).imag())}));
    return arr;
}

}  // namespace

Json to_json(const Tolerances& tol) {
    return Json{{"tau_scale", number(tol.tau_scale)},
                {"eta", number(tol.eta)},
                {"edge_width", tol.edge_width},
                {"near_kernel_theta", number(tol.near_kernel_theta)},
                {"representation", number(kRepresentationTol)}};
}

Json envelope(const std::string& command, const Tolerances& tol) {
    return Json{{"schema", kSchema}, {"command", command}, {"tolerances", to_json(tol)}};
}

Json to_json(const FrameDiagnostics& d) {
    return Json{{"A", number(d.lower_bound_A)},       {"B", number(d.upper_bound_B)},
                {"rank", d.rank},                     {"count", d.count},
                {"excess", d.excess},                 {"linearly_independent", d.linearly_independent},
                {"tight", d.tight}};
}

Json to_json(const IteratedRep& rep) {
    return Json{{"representable", rep.representable},
                {"residual", number(rep.residual)},
                {"invertible", rep.invertible},
                {"inverse_residual", number(rep.inverse_residual)},
                {"norm", number(rep.norm_on_span)},
                {"inverse_norm", number(rep.inv_norm_on_span)},
                {"domain_dim", rep.domain_basis.cols()}};
}

Json to_json(const NormBoundsReport& r) {
    return Json{{"norm", number(r.norm)},         {"inverse_norm", number(r.inv_norm)},
                {"lower", number(r.lower)},       {"upper", r.upper_checked ? number(r.upper) : Json(nullptr)},
                {"lower_ok", r.lower_ok},         {"inverse_lower_ok", r.inv_lower_ok},
                {"upper_ok", r.upper_ok},         {"inverse_upper_ok", r.inv_upper_ok}};
}

Json to_json(const LadderWindow& w) {
    return Json{{"n", w.n},
                {"representable", w.representable},
                {"residual", number(w.residual)},
                {"norm", number(w.norm)},
                {"inverse_norm", number(w.inv_norm)},
                {"sqrt_ratio", number(w.sqrt_ratio)},
                {"excess", w.excess},
                {"kernel_dim", w.kernel_dim},
                {"near_kernel", w.near_kernel},
                {"defect_right", number(w.defect_right)},
                {"defect_left", number(w.defect_left)},
                {"trusted", w.trusted},
                {"interior_dim", w.interior_dim},
                {"quarantined", w.quarantined}};
}

Json to_json(const BoundednessLadder& l) {
    Json windows = Json::array();
    for (const auto& w : l.windows) windows.push_back(to_json(w));
    Json j{{"label", l.label},
           {"verdict", verdict_name(l.verdict)},
           {"growth_verdict", verdict_name(l.growth_verdict)},
           {"defect_verdict", verdict_name(l.defect_verdict)},
           {"growth_exponent", number(l.growth_exponent)},
           {"windows", windows}};
    if (!l.note.empty()) j["note"] = l.note;
    return j;
}

Json to_json(const DualFamily& d) {
    Json j{{"provenance", d.provenance},
           {"label", d.family.label},
           {"reconstruction_residual", number(d.reconstruction_residual)},
           {"iterated_form_residual", optional_number(d.iterated_form_residual)},
           {"uniqueness_residual", optional_number(d.uniqueness_residual)}};
    if (d.provenance == "h0_formula") j["h0_projected"] = d.h0_projected;
    return j;
}

Json to_json(const UniquenessReport& r) {
    Json j{{"applicable", r.applicable}, {"residual", number(r.residual)}, {"v_norm", number(r.v_norm)}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

Json to_json(const IntertwiningReport& r) {
    return Json{{"tu_residual", number(r.tu_residual)},
                {"tst_residual", optional_number(r.tst_residual)},
                {"tst_interior", optional_number(r.tst_interior)},
                {"commutator", number(r.commutator)},
                {"unitarity", number(r.unitarity)},
                {"commutes", r.commutes},
                {"unitary", r.unitary},
                {"biconditional_holds", r.biconditional_holds}};
}

Json to_json(const ToeplitzReport& r) {
    return Json{{"toeplitz_defect", number(r.toeplitz_defect)},
                {"toeplitz", r.toeplitz},
                {"checked", r.checked},
                {"adjoint_shift_residual", r.checked ? number(r.adjoint_shift_residual) : Json(nullptr)},
                {"unitarity", r.checked ? number(r.unitarity) : Json(nullptr)},
                {"unitary", r.unitary}};
}

Json to_json(const PhiProfile& p) {
    Json grid = Json::array(), values = Json::array();
    for (double g : p.grid) grid.push_back(number(g));
    for (double v : p.values) values.push_back(number(v));
    return Json{{"essential_inf_off_zero", number(p.essential_inf_off_zero)},
                {"essential_sup", number(p.essential_sup)},
                {"frame_sequence", p.frame_sequence},
                {"riesz", p.riesz},
                {"grid", grid},
                {"values", values}};
}

Json to_json(const PerturbationVerdict& v) {
    Json j{{"mu_min", number(v.mu_min)},
           {"lambda1_min", number(v.lambda1_min)},
           {"kernel_leak", v.kernel_leak},
           {"A", number(v.lower_bound_A)},
           {"B", number(v.upper_bound_B)},
           {"A_g", number(v.lower_bound_g)},
           {"cond_l1l2", v.cond_l1l2},
           {"cond_mu", v.cond_mu},
           {"g_is_frame", v.g_is_frame},
           {"g_representable", v.g_representable},
           {"g_residual", number(v.g_residual)},
           {"kernel_angle", number(v.kernel_angle)},
           {"f_ladder_verdict", optional_verdict(v.f_ladder_verdict)},
           {"g_ladder_verdict", optional_verdict(v.g_ladder_verdict)}};
    if (v.ladder_f) j["ladder_f"] = to_json(*v.ladder_f);
    if (v.ladder_g) j["ladder_g"] = to_json(*v.ladder_g);
    return j;
}

Json to_json(const TransferReport& r) {
    Json j{{"precondition", r.precondition},
           {"g_representable", r.g_representable},
           {"v_norm", number(r.v_norm)},
           {"kernel_angle", number(r.kernel_angle)},
           {"kernels_equal", r.kernels_equal},
           {"f_ladder_verdict", optional_verdict(r.f_ladder_verdict)},
           {"g_ladder_verdict", optional_verdict(r.g_ladder_verdict)}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json to_json(const MuIndependenceReport& r) {
    return Json{{"alpha", number(r.alpha)},
                {"window", r.window},
                {"mu_measured", number(r.mu_measured)},
                {"mu_expected", number(r.mu_expected)},
                {"sqrt_A", number(r.sqrt_A)},
                {"f_representable", r.f_representable},
                {"g_is_frame", r.g_is_frame},
                {"g_linearly_independent", r.g_linearly_independent},
                {"g_representable", r.g_representable},
                {"perturbation", to_json(r.verdict)}};
}

Json to_json(const SincPerturbReport& r) {
    return Json{{"c", number(r.c)},
                {"rate", r.rate},
                {"windows", r.windows},
                {"mu", number(r.mu)},
                {"sqrt_A", number(r.sqrt_A)},
                {"cond_a_complete", r.cond_a_complete},
                {"cond_b_mu", r.cond_b_mu},
                {"cond_c_independent", r.cond_c_independent},
                {"claim_checked", r.claim_checked},
                {"ladder_f", to_json(r.ladder_f)},
                {"ladder_g", to_json(r.ladder_g)}};
}

Json to_json(const PartitionReport& r) {
    Json parts = Json::array();
    for (const auto& p : r.parts) {
        parts.push_back(Json{{"indices", p.indices},
                             {"f_lower_bound", number(p.f_lower_bound)},
                             {"g_lower_bound", number(p.g_lower_bound)},
                             {"g_excess", p.g_excess},
                             {"g_riesz", p.g_riesz},
                             {"g_representable", p.g_representable},
                             {"w_norm", number(p.w_norm)},
                             {"ladder_verdict", optional_verdict(p.ladder_verdict)},
                             {"phi", vector_to_json(p.phi)}});
    }
    return Json{{"A", number(r.A)},
                {"mu", number(r.mu)},
                {"mu_measured", number(r.mu_measured)},
                {"precondition", r.precondition},
                {"all_parts_riesz", r.all_parts_riesz},
                {"all_parts_bounded", r.all_parts_bounded},
                {"parts", parts}};
}

Json to_json(const OracleReport& r) {
    return Json{{"probes", r.probes},
                {"mu_sup", number(r.mu_sup)},
                {"lambda1_sup", number(r.lambda1_sup)},
                {"ratio_min", number(r.ratio_min)},
                {"ratio_max", number(r.ratio_max)},
                {"gram_min", number(r.gram_min)},
                {"gram_max", number(r.gram_max)}};
}

Json to_json(const ExcessGrowthReport& r) {
    return Json{{"windows", r.windows}, {"excess", r.excess}, {"nondecreasing", r.nondecreasing}, {"grows", r.grows}};
}

Json family_to_json(const FrameFamily& fam) {
    Json vectors = Json::array();
    for (Eigen::Index k = 0; k < fam.size(); ++k) vectors.push_back(vector_to_json(fam.vectors.col(k)));
    Json j{{"schema", kSchema},
           {"label", fam.label},
           {"window", Json::array({fam.k_min, fam.k_max})},
           {"ambient", fam.ambient_dim()}};
    if (fam.reference_lower_bound) j["reference_lower_bound"] = number(*fam.reference_lower_bound);
    j["vectors"] = vectors;
    return j;
}

FrameFamily family_from_json(const nlohmann::json& j) {
    try {
        const auto& vecs = j.at("vectors");
        if (!vecs.is_array() || vecs.empty()) throw Error(ErrorKind::ShapeError, "family has no vectors");
        const auto m = static_cast<Eigen::Index>(vecs.at(0).size());
        CMatrix v(m, static_cast<Eigen::Index>(vecs.size()));
        for (std::size_t k = 0; k < vecs.size(); ++k) {
            if (static_cast<Eigen::Index>(vecs[k].size()) != m)
                throw Error(ErrorKind::ShapeError, "family vectors differ in length");
            for (Eigen::Index i = 0; i < m; ++i) {
                const auto& z = vecs[k][static_cast<std::size_t>(i)];
                v(i, static_cast<Eigen::Index>(k)) = z.is_array()
                                                         ? Complex(number_from_json(z.at(0)), number_from_json(z.at(1)))
                                                         : Complex(number_from_json(z), 0.0);
            }
        }
        long k_min = -static_cast<long>(vecs.size() / 2);
        if (j.contains("window")) k_min = j.at("window").at(0).get<long>();
        FrameFamily fam = make_family(j.value("label", std::string("family")), k_min, std::move(v));
        if (j.contains("window") && j.at("window").at(1).get<long>() != fam.k_max)
            throw Error(ErrorKind::ShapeError, "window does not match the number of vectors");
        if (j.contains("reference_lower_bound")) fam.reference_lower_bound = number_from_json(j.at("reference_lower_bound"));
        fam.validate();
        return fam;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("family JSON: ") + e.what());
    }
}

FrameFamily read_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    if (std::filesystem::path(path).extension() == ".csv") {
        CMatrix v = read_csv(in);
        const long k_min = -static_cast<long>(v.cols() / 2);
        FrameFamily fam = make_family(std::filesystem::path(path).stem().string(), k_min, std::move(v));
        fam.validate();
        return fam;
    }
    try {
        return family_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, "'" + path + "': " + e.what());
    }
}

std::string ladder_csv(const BoundednessLadder& l) {
    std::ostringstream out;
    out.precision(17);
    out << "n,representable,residual,norm,inv_norm,sqrt_ratio,excess,kernel_dim,defect_right,defect_left,trusted\n";
    for (const auto& w : l.windows)
        out << w.n << ',' << w.representable << ',' << w.residual << ',' << w.norm << ',' << w.inv_norm << ','
            << w.sqrt_ratio << ',' << w.excess << ',' << w.kernel_dim << ',' << w.defect_right << ',' << w.defect_left
            << ',' << w.trusted << '\n';
    return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::ParseError, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw Error(ErrorKind::ParseError, "write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error(ErrorKind::ParseError, "cannot move output into '" + path + "': " + ec.message());
    }
}

}  // namespace fi
