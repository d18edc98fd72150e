#pragma once

#include <cmath>

namespace pursuit {

inline constexpr double kPi = 3.14159265358979323846;

// Minimal 3D vector. Positions are NED (north, east, down) in meters,
// so altitude is -z throughout.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm_sq() const { return dot(*this); }
    double norm() const { return std::sqrt(norm_sq()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Angle between two vectors in [0, pi]. Both inputs must be nonzero.
inline double angle_between(const Vec3& a, const Vec3& b) {
    const double c = a.dot(b) / (a.norm() * b.norm());
    return std::acos(std::fmin(1.0, std::fmax(-1.0, c)));
}

// Wrap an angle to (-pi, pi].
inline double wrap_pi(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0) a += 2.0 * kPi;
    return a - kPi;
}

inline double deg2rad(double d) { return d * kPi / 180.0; }

}  // namespace pursuit
