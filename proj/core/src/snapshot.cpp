#include "msqg/snapshot.hpp"

#include <cmath>

#include <json.hpp>

namespace msqg {

std::string state_to_json(const ContourState& state) {
    state.check();
    nlohmann::json j;
    j["grid_size"] = state.grid_size();
    j["time"] = state.time;
    j["domain"] = state.domain == Domain::HalfPlane ? "half-plane" : "plane";
    j["curves"] = nlohmann::json::array();
    for (const Curve& c : state.curves) {
        nlohmann::json curve = nlohmann::json::array();
        for (const Vec2& p : c.samples) curve.push_back({p.x, p.y});
        j["curves"].push_back(std::move(curve));
    }
    return j.dump(2);
}

ContourState state_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("snapshot is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw validation_error("snapshot must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "grid_size" && key != "curves" && key != "time" && key != "domain")
            throw validation_error("snapshot has an unknown key: " + key);
    }
    for (const char* key : {"grid_size", "curves", "time", "domain"})
        if (!j.contains(key))
            throw validation_error(std::string("snapshot is missing key: ") + key);

    if (!j["grid_size"].is_number_integer())
        throw validation_error("snapshot grid_size must be an integer");
    const int m = j["grid_size"].get<int>();
    check_grid_size(m);

    if (!j["time"].is_number()) throw validation_error("snapshot time must be a number");
    if (!j["domain"].is_string())
        throw validation_error("snapshot domain must be \"plane\" or \"half-plane\"");
    const std::string domain = j["domain"].get<std::string>();
    if (domain != "plane" && domain != "half-plane")
        throw validation_error("snapshot domain must be \"plane\" or \"half-plane\"");

    ContourState state;
    state.time = j["time"].get<double>();
    state.domain = domain == "half-plane" ? Domain::HalfPlane : Domain::WholePlane;
    if (!j["curves"].is_array() || j["curves"].empty())
        throw validation_error("snapshot curves must be a non-empty array");
    for (const auto& jc : j["curves"]) {
        if (!jc.is_array() || static_cast<int>(jc.size()) != m)
            throw validation_error("each snapshot curve must list exactly grid_size points");
        Curve curve;
        curve.samples.reserve(m);
        for (const auto& jp : jc) {
            if (!jp.is_array() || jp.size() != 2 || !jp[0].is_number() || !jp[1].is_number())
                throw validation_error("snapshot points must be [x, y] number pairs");
            curve.samples.push_back({jp[0].get<double>(), jp[1].get<double>()});
        }
        state.curves.push_back(std::move(curve));
    }
    state.check();
    return state;
}

} // namespace msqg
