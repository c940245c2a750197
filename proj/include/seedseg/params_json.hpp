#pragma once

#include <string>

#include <json.hpp>

#include "seedseg/engine.hpp"

namespace seedseg {

/// Keys mirror the CLI flags in camelCase: epsilon, lambda, gForm, sigma,
/// truncationRadius, tau, omega, tol, maxSweeps, residualFactor, finalTime,
/// steps, steadyTol, delta, bigM, initCircle ([cx, cy, r]).
nlohmann::json paramsToJson(const SegmentationParams& p);

/// Overlays the keys present in `j` onto `base`. Unknown keys, wrong types and
/// null for a required field raise ParameterError. Range checks are left to
/// SegmentationParams::validate.
SegmentationParams paramsFromJson(const nlohmann::json& j, SegmentationParams base = {});

nlohmann::json reportToJson(const SolveReport& r);

}  // namespace seedseg
