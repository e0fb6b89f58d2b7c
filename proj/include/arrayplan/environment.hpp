#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "geometry.hpp"

namespace arrayplan {

struct Environment {
    double width = 0.0;         // meters
    double height = 0.0;        // meters
    double grid_spacing = 1.0;  // meters
    std::vector<Polygon> obstacles;
    double array_height = 30.0; // metadata, unused by the 2D models
    double user_height = 1.5;   // metadata
};

inline void validate(const Environment& env) {
    if (!(env.width > 0.0)) throw std::invalid_argument("environment: width must be positive");
    if (!(env.height > 0.0)) throw std::invalid_argument("environment: height must be positive");
    if (!(env.grid_spacing > 0.0)) throw std::invalid_argument("environment: grid_spacing must be positive");
    for (std::size_t k = 0; k < env.obstacles.size(); ++k) {
        const Polygon& poly = env.obstacles[k];
        std::string tag = "environment: obstacle " + std::to_string(k);
        if (poly.size() < 3) throw std::invalid_argument(tag + " needs at least 3 vertices");
        for (const Point& p : poly) {
            if (p.x < 0.0 || p.x > env.width || p.y < 0.0 || p.y > env.height)
                throw std::invalid_argument(tag + " has a vertex outside the region");
        }
        if (!polygon_is_simple(poly))
            throw std::invalid_argument(tag + " is self-intersecting");
    }
}

inline Environment environment_from_json(const nlohmann::json& j) {
    Environment env;
    env.width = j.at("width_m").get<double>();
    env.height = j.at("height_m").get<double>();
    if (j.contains("grid_spacing_m")) env.grid_spacing = j.at("grid_spacing_m").get<double>();
    if (j.contains("array_height_m")) env.array_height = j.at("array_height_m").get<double>();
    if (j.contains("user_height_m")) env.user_height = j.at("user_height_m").get<double>();
    if (j.contains("obstacles")) {
        for (const auto& jpoly : j.at("obstacles")) {
            Polygon poly;
            for (const auto& jv : jpoly) {
                if (!jv.is_array() || jv.size() != 2)
                    throw std::invalid_argument("environment: obstacle vertex must be [x, y]");
                poly.push_back({jv[0].get<double>(), jv[1].get<double>()});
            }
            env.obstacles.push_back(std::move(poly));
        }
    }
    validate(env);
    return env;
}

inline Environment load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open environment file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("environment file " + path + ": " + e.what());
    }
    try {
        return environment_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("environment file " + path + ": " + e.what());
    }
}

} // namespace arrayplan
