#pragma once

#include <string>
#include <vector>

namespace indoorloc {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Point3&) const = default;
};

// 3D Euclidean distance in meters.
double euclidean_distance(const Point3& p, const Point3& q);

struct ReferencePoint {
    int id = 0;   // 1-based, consecutive
    Point3 position;

    bool operator==(const ReferencePoint&) const = default;
};

struct AccessPoint {
    int id = 0;   // 1-based, consecutive
    Point3 position;

    bool operator==(const AccessPoint&) const = default;
};

// Room plus RP/AP layout. Immutable after construction by convention; all
// readers may share it across threads.
struct Scenario {
    Point3 room_dims;
    std::vector<ReferencePoint> reference_points;
    std::vector<AccessPoint> access_points;

    // Enforces consecutive 1-based ids and positions inside the room.
    // Throws std::invalid_argument naming the offending element.
    void validate() const;

    const ReferencePoint& rp_by_id(int rp_id) const;
    const AccessPoint& ap_by_id(int ap_id) const;

    bool operator==(const Scenario&) const = default;
};

// RPs at the centers of a rows x cols division of the floor plan, ids assigned
// row-major from the room origin starting at 1.
Scenario build_grid_scenario(const Point3& room_dims, int grid_rows, int grid_cols,
                             double rp_height, const std::vector<Point3>& ap_positions);

// `count` positions evenly spaced along the room perimeter at the given height
// (half-step offset from the origin corner, so 8 APs land two per wall).
std::vector<Point3> wall_ap_layout(const Point3& room_dims, int count, double ap_height);

// Stock scenario: 3.50 x 3.56 x 2.80 m room, 4x4 RP grid at 0.87 m, 8 wall APs.
Scenario default_scenario(double ap_height = 2.0);

std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

}  // namespace indoorloc
