#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace suav {

// Minimal fixed-size linear algebra for 3-vectors and 3x3 matrices.
// Everything is a value type; no dynamic allocation.

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr double &operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 &operator+=(const Vec3 &o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    [[nodiscard]] constexpr double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    [[nodiscard]] constexpr Vec3 cross(const Vec3 &o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    [[nodiscard]] double norm() const { return std::sqrt(dot(*this)); }
    [[nodiscard]] bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }

struct Mat3 {
    // Row-major storage.
    std::array<double, 9> m{};

    constexpr double &operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }
    constexpr double operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }

    static constexpr Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

    static constexpr Mat3 diagonal(double a, double b, double c) {
        return Mat3{{a, 0, 0, 0, b, 0, 0, 0, c}};
    }

    constexpr Mat3 operator*(const Mat3 &o) const {
        Mat3 r;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
        return r;
    }

    constexpr Vec3 operator*(const Vec3 &v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    constexpr Mat3 operator+(const Mat3 &o) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }

    constexpr Mat3 operator-(const Mat3 &o) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
        return r;
    }

    constexpr Mat3 operator*(double s) const {
        Mat3 r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] * s;
        return r;
    }

    [[nodiscard]] constexpr Mat3 transpose() const {
        return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }

    [[nodiscard]] constexpr double det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    // Inverse by adjugate; caller guarantees a well-conditioned matrix
    // (inertia tensors and rotations in this codebase).
    [[nodiscard]] constexpr Mat3 inverse() const {
        const double d = det();
        Mat3 adj{{m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
                  m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
                  m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]}};
        return adj * (1.0 / d);
    }

    [[nodiscard]] double max_abs_diff(const Mat3 &o) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < 9; ++i) worst = std::max(worst, std::abs(m[i] - o.m[i]));
        return worst;
    }

    [[nodiscard]] bool finite() const {
        for (double v : m)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

} // namespace suav
