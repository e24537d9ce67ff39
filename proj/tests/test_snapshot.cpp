#include <doctest.h>

#include <set>
#include <string>

#include <json.hpp>

#include "msqg/snapshot.hpp"

using namespace msqg;

namespace {

ContourState sample_state() {
    ContourState state;
    state.domain = Domain::HalfPlane;
    state.time = 0.3125;
    state.curves.push_back(make_circle({-1.2, 2.0}, 0.8, 32));
    state.curves.push_back(make_ellipse({1.3, 2.4}, 0.9, 0.5, 0.7, 32));
    return state;
}

} // namespace

TEST_SUITE_BEGIN("snapshot");

TEST_CASE("round trip preserves every sample bit for bit") {
    const ContourState state = sample_state();
    const ContourState back = state_from_json(state_to_json(state));
    CHECK(back.time == state.time);
    CHECK(back.domain == state.domain);
    REQUIRE(back.curves.size() == state.curves.size());
    for (std::size_t k = 0; k < state.curves.size(); ++k) {
        REQUIRE(back.curves[k].samples.size() == state.curves[k].samples.size());
        for (std::size_t j = 0; j < state.curves[k].samples.size(); ++j) {
            CHECK(back.curves[k].samples[j].x == state.curves[k].samples[j].x);
            CHECK(back.curves[k].samples[j].y == state.curves[k].samples[j].y);
        }
    }
}

TEST_CASE("the document carries exactly the contract keys") {
    const nlohmann::json doc = nlohmann::json::parse(state_to_json(sample_state()));
    std::set<std::string> keys;
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        keys.insert(key);
    }
    CHECK((keys == std::set<std::string>{"curves", "domain", "grid_size", "time"}));
    CHECK(doc["grid_size"] == 32);
    CHECK(doc["domain"] == "half-plane");
    CHECK(doc["curves"].size() == 2);
    CHECK(doc["curves"][0].size() == 32);

    ContourState plane;
    plane.curves.push_back(make_circle({0, 0}, 1.0, 16));
    CHECK(nlohmann::json::parse(state_to_json(plane))["domain"] == "plane");
}

TEST_CASE("unknown keys are rejected") {
    nlohmann::json doc = nlohmann::json::parse(state_to_json(sample_state()));
    doc["note"] = "hand edited";
    CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);
}

TEST_CASE("missing keys are rejected one by one") {
    const std::string text = state_to_json(sample_state());
    for (const char* key : {"grid_size", "curves", "time", "domain"}) {
        nlohmann::json doc = nlohmann::json::parse(text);
        doc.erase(key);
        CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);
    }
}

TEST_CASE("malformed documents are rejected with validation errors") {
    CHECK_THROWS_AS(state_from_json("{ not json"), validation_error);
    CHECK_THROWS_AS(state_from_json("[1, 2, 3]"), validation_error);

    const std::string text = state_to_json(sample_state());

    nlohmann::json doc = nlohmann::json::parse(text);
    doc["grid_size"] = "32";
    CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);

    doc = nlohmann::json::parse(text);
    doc["grid_size"] = 24; // not a power of two
    CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);

    doc = nlohmann::json::parse(text);
    doc["time"] = "later";
    CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);

    doc = nlohmann::json::parse(text);
    doc["domain"] = "disk";
    CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);

    doc = nlohmann::json::parse(text);
    doc["curves"] = nlohmann::json::array();
    CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);

    // One point short of grid_size.
    doc = nlohmann::json::parse(text);
    doc["curves"][0].erase(0);
    CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);

    doc = nlohmann::json::parse(text);
    doc["curves"][0][0] = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);

    doc = nlohmann::json::parse(text);
    doc["curves"][0][0] = {"x", 2.0};
    CHECK_THROWS_AS(state_from_json(doc.dump()), validation_error);
}

TEST_CASE("structural checks run on the parsed state") {
    // A half-plane snapshot whose curve dips below the axis fails the check.
    nlohmann::json doc = nlohmann::json::parse(state_to_json(sample_state()));
    doc["curves"][0][5] = {0.0, -0.5};
    CHECK_THROWS_AS(state_from_json(doc.dump()), msqg::error);
}

TEST_SUITE_END();
