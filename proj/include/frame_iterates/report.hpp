#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "frame_iterates/duality.hpp"
#include "frame_iterates/frames.hpp"
#include "frame_iterates/generators.hpp"
#include "frame_iterates/iteration.hpp"
#include "frame_iterates/perturbation.hpp"

namespace fi {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "frame-iterates/1";

// Finite doubles as numbers; infinities and NaN as the strings "Infinity", "-Infinity", "NaN".
Json number(double x);
double number_from_json(const nlohmann::json& j);

Json envelope(const std::string& command, const Tolerances& tol);

Json to_json(const Tolerances& tol);
Json to_json(const FrameDiagnostics& d);
Json to_json(const IteratedRep& rep);
Json to_json(const NormBoundsReport& r);
Json to_json(const LadderWindow& w);
Json to_json(const BoundednessLadder& l);
Json to_json(const DualFamily& d);
Json to_json(const UniquenessReport& r);
Json to_json(const IntertwiningReport& r);
Json to_json(const ToeplitzReport& r);
Json to_json(const PhiProfile& p);
Json to_json(const PerturbationVerdict& v);
Json to_json(const TransferReport& r);
Json to_json(const MuIndependenceReport& r);
Json to_json(const SincPerturbReport& r);
Json to_json(const PartitionReport& r);
Json to_json(const OracleReport& r);
Json to_json(const ExcessGrowthReport& r);

// FrameFamily JSON: {"schema", "label", "window": [k_min, k_max], "ambient", "vectors": [[[re, im], ...], ...]}
// with one inner array per family vector.
Json family_to_json(const FrameFamily& fam);
FrameFamily family_from_json(const nlohmann::json& j);

// Reads a family from a .json file or a .csv matrix (one column per vector, window centred on 0).
FrameFamily read_family(const std::string& path);

// Plot-ready ladder table: n, representable, residual, norm, inv_norm, sqrt_ratio, excess, kernel_dim,
// defect_right, defect_left, trusted.
std::string ladder_csv(const BoundednessLadder& l);

// Writes through a temporary file in the target directory followed by a rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace fi
