/*
   Copyright 2026 The raychaos Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>

namespace raychaos {

/// Point or vector in the cavity plane. `z` runs along the optical axis,
/// `y` is the transverse coordinate.
struct Vec2 {
    double z = 0.0;
    double y = 0.0;

    constexpr Vec2 &operator+=(Vec2 o)
    {
        z += o.z;
        y += o.y;
        return *this;
    }
    constexpr Vec2 &operator-=(Vec2 o)
    {
        z -= o.z;
        y -= o.y;
        return *this;
    }
    constexpr Vec2 &operator*=(double s)
    {
        z *= s;
        y *= s;
        return *this;
    }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return a -= b; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.z, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.z * b.z + a.y * b.y; }

/// z-component of the 3D cross product.
constexpr double cross(Vec2 a, Vec2 b) { return a.z * b.y - a.y * b.z; }

inline double norm(Vec2 a) { return std::hypot(a.z, a.y); }

inline Vec2 normalized(Vec2 a) { return a * (1.0 / norm(a)); }

/// Counter-clockwise rotation by 90 degrees.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.z}; }

} // namespace raychaos
