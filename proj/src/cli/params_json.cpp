#include "seedseg/params_json.hpp"

#include <string>

#include "seedseg/errors.hpp"

namespace seedseg {

using nlohmann::json;

namespace {

double number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ParameterError("parameter '" + key + "' must be a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ParameterError("parameter '" + key + "' must be an integer");
    const auto x = v.get<long long>();
    if (x < -2147483647LL || x > 2147483647LL) throw ParameterError("parameter '" + key + "' is out of range");
    return static_cast<int>(x);
}

template <class T>
json optionalToJson(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json paramsToJson(const SegmentationParams& p) {
    json j;
    j["epsilon"] = p.epsilon;
    j["lambda"] = p.edgeStop.lambda;
    j["gForm"] = toString(p.edgeStop.form);
    j["sigma"] = optionalToJson(p.sigma);
    j["truncationRadius"] = p.truncationRadius;
    j["tau"] = optionalToJson(p.tau);
    j["omega"] = p.solver.omega;
    j["tol"] = p.solver.tol;
    j["maxSweeps"] = p.solver.maxSweeps;
    j["residualFactor"] = p.residualFactor;
    j["finalTime"] = optionalToJson(p.finalTime);
    j["steps"] = optionalToJson(p.steps);
    j["steadyTol"] = p.steadyTol;
    j["delta"] = optionalToJson(p.delta);
    j["bigM"] = p.bigM;
    if (p.initCircle)
        j["initCircle"] = {p.initCircle->center.x1, p.initCircle->center.x2, p.initCircle->radius};
    else
        j["initCircle"] = nullptr;
    return j;
}

SegmentationParams paramsFromJson(const json& j, SegmentationParams p) {
    if (!j.is_object()) throw ParameterError("parameters must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        // null resets an optional field to its derived default
        const bool unset = v.is_null();
        if (key == "epsilon") p.epsilon = number(v, key);
        else if (key == "lambda") p.edgeStop.lambda = number(v, key);
        else if (key == "gForm") {
            if (!v.is_string()) throw ParameterError("parameter 'gForm' must be a string");
            try {
                p.edgeStop.form = parseEdgeStopForm(v.get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ParameterError(e.what());
            }
        } else if (key == "sigma") p.sigma = unset ? std::nullopt : std::optional(number(v, key));
        else if (key == "truncationRadius") p.truncationRadius = number(v, key);
        else if (key == "tau") p.tau = unset ? std::nullopt : std::optional(number(v, key));
        else if (key == "omega") p.solver.omega = number(v, key);
        else if (key == "tol") p.solver.tol = number(v, key);
        else if (key == "maxSweeps") p.solver.maxSweeps = integer(v, key);
        else if (key == "residualFactor") p.residualFactor = number(v, key);
        else if (key == "finalTime") p.finalTime = unset ? std::nullopt : std::optional(number(v, key));
        else if (key == "steps") p.steps = unset ? std::nullopt : std::optional(integer(v, key));
        else if (key == "steadyTol") p.steadyTol = number(v, key);
        else if (key == "delta") p.delta = unset ? std::nullopt : std::optional(number(v, key));
        else if (key == "bigM") p.bigM = number(v, key);
        else if (key == "initCircle") {
            if (unset) {
                p.initCircle.reset();
                continue;
            }
            if (!v.is_array() || v.size() != 3) throw ParameterError("parameter 'initCircle' must be [cx, cy, r]");
            p.initCircle = Circle{{number(v[0], key), number(v[1], key)}, number(v[2], key)};
        } else
            throw ParameterError("unknown parameter '" + key + "'");
    }
    return p;
}

json reportToJson(const SolveReport& r) {
    return {{"sweeps", r.sweeps},
            {"sweepDifference", r.sweepDifference},
            {"linearResidual", r.linearResidual},
            {"complementarityResidual", r.complementarityResidual},
            {"converged", r.converged}};
}

}  // namespace seedseg
