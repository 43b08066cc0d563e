#pragma once

#include <cmath>

namespace uavslice {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Point3& a, const Point3& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

inline double horizontal_distance(const Point3& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline Point3 lifted(const Point2& p, double z) { return {p.x, p.y, z}; }

}  // namespace uavslice
