#include "indoorloc/geometry.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace indoorloc {

double euclidean_distance(const Point3& p, const Point3& q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dz = p.z - q.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

bool finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

bool inside_room(const Point3& p, const Point3& dims) {
    return p.x >= 0.0 && p.x <= dims.x && p.y >= 0.0 && p.y <= dims.y && p.z >= 0.0 &&
           p.z <= dims.z;
}

}  // namespace

void Scenario::validate() const {
    if (!finite(room_dims) || room_dims.x <= 0.0 || room_dims.y <= 0.0 || room_dims.z <= 0.0) {
        throw std::invalid_argument("scenario: room_dims must be finite and positive");
    }
    if (reference_points.empty()) {
        throw std::invalid_argument("scenario: no reference points");
    }
    for (std::size_t i = 0; i < reference_points.size(); ++i) {
        const auto& rp = reference_points[i];
        if (rp.id != static_cast<int>(i) + 1) {
            throw std::invalid_argument("scenario: rp ids must be consecutive from 1, found id " +
                                        std::to_string(rp.id) + " at position " +
                                        std::to_string(i + 1));
        }
        if (!finite(rp.position) || !inside_room(rp.position, room_dims)) {
            throw std::invalid_argument("scenario: rp " + std::to_string(rp.id) +
                                        " lies outside the room");
        }
    }
    for (std::size_t i = 0; i < access_points.size(); ++i) {
        const auto& ap = access_points[i];
        if (ap.id != static_cast<int>(i) + 1) {
            throw std::invalid_argument("scenario: ap ids must be consecutive from 1, found id " +
                                        std::to_string(ap.id) + " at position " +
                                        std::to_string(i + 1));
        }
        if (!finite(ap.position) || !inside_room(ap.position, room_dims)) {
            throw std::invalid_argument("scenario: ap " + std::to_string(ap.id) +
                                        " lies outside the room");
        }
    }
}

const ReferencePoint& Scenario::rp_by_id(int rp_id) const {
    if (rp_id < 1 || rp_id > static_cast<int>(reference_points.size())) {
        throw std::invalid_argument("scenario: unknown rp_id " + std::to_string(rp_id));
    }
    return reference_points[static_cast<std::size_t>(rp_id) - 1];
}

const AccessPoint& Scenario::ap_by_id(int ap_id) const {
    if (ap_id < 1 || ap_id > static_cast<int>(access_points.size())) {
        throw std::invalid_argument("scenario: unknown ap_id " + std::to_string(ap_id));
    }
    return access_points[static_cast<std::size_t>(ap_id) - 1];
}

Scenario build_grid_scenario(const Point3& room_dims, int grid_rows, int grid_cols,
                             double rp_height, const std::vector<Point3>& ap_positions) {
    if (grid_rows < 1 || grid_cols < 1) {
        throw std::invalid_argument("build_grid_scenario: grid_rows and grid_cols must be >= 1");
    }
    if (rp_height < 0.0 || rp_height > room_dims.z) {
        throw std::invalid_argument("build_grid_scenario: rp_height " + std::to_string(rp_height) +
                                    " outside room height");
    }

    Scenario s;
    s.room_dims = room_dims;
    int next_id = 1;
    for (int r = 1; r <= grid_rows; ++r) {
        for (int c = 1; c <= grid_cols; ++c) {
            const Point3 center{(2 * c - 1) * room_dims.x / (2.0 * grid_cols),
                                (2 * r - 1) * room_dims.y / (2.0 * grid_rows), rp_height};
            s.reference_points.push_back({next_id++, center});
        }
    }
    int ap_id = 1;
    for (const auto& pos : ap_positions) {
        if (!inside_room(pos, room_dims)) {
            throw std::invalid_argument("build_grid_scenario: ap " + std::to_string(ap_id) +
                                        " lies outside the room");
        }
        s.access_points.push_back({ap_id++, pos});
    }
    s.validate();
    return s;
}

std::vector<Point3> wall_ap_layout(const Point3& room_dims, int count, double ap_height) {
    if (count < 1) {
        throw std::invalid_argument("wall_ap_layout: count must be >= 1");
    }
    if (ap_height < 0.0 || ap_height > room_dims.z) {
        throw std::invalid_argument("wall_ap_layout: ap_height outside room height");
    }
    const double X = room_dims.x;
    const double Y = room_dims.y;
    const double perimeter = 2.0 * (X + Y);

    std::vector<Point3> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double s = (i + 0.5) * perimeter / count;
        Point3 p{0.0, 0.0, ap_height};
        if (s < X) {
            p.x = s;
            p.y = 0.0;
        } else if (s < X + Y) {
            p.x = X;
            p.y = s - X;
        } else if (s < 2.0 * X + Y) {
            p.x = X - (s - X - Y);
            p.y = Y;
        } else {
            p.x = 0.0;
            p.y = Y - (s - 2.0 * X - Y);
        }
        out.push_back(p);
    }
    return out;
}

Scenario default_scenario(double ap_height) {
    const Point3 room{3.50, 3.56, 2.80};
    return build_grid_scenario(room, 4, 4, 0.87, wall_ap_layout(room, 8, ap_height));
}

namespace {

nlohmann::json point_to_json(const Point3& p) {
    return nlohmann::json{{"x", p.x}, {"y", p.y}, {"z", p.z}};
}

Point3 point_from_json(const nlohmann::json& j) {
    return Point3{j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>()};
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["room"] = point_to_json(s.room_dims);
    j["reference_points"] = nlohmann::json::array();
    for (const auto& rp : s.reference_points) {
        j["reference_points"].push_back({{"id", rp.id}, {"position", point_to_json(rp.position)}});
    }
    j["access_points"] = nlohmann::json::array();
    for (const auto& ap : s.access_points) {
        j["access_points"].push_back({{"id", ap.id}, {"position", point_to_json(ap.position)}});
    }
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario: invalid JSON: ") + e.what());
    }
    Scenario s;
    try {
        s.room_dims = point_from_json(j.at("room"));
        for (const auto& rp : j.at("reference_points")) {
            s.reference_points.push_back(
                {rp.at("id").get<int>(), point_from_json(rp.at("position"))});
        }
        for (const auto& ap : j.at("access_points")) {
            s.access_points.push_back(
                {ap.at("id").get<int>(), point_from_json(ap.at("position"))});
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("scenario: missing or malformed field: ") +
                                    e.what());
    }
    s.validate();
    return s;
}

}  // namespace indoorloc
