#pragma once
// Shared small types: 2-vectors (dimension 1 uses the x slot only),
// symmetric 2x2 matrices, deterministic hashing, round-trip formatting.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kpplab {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

// Symmetric diffusion matrix; dimension 1 uses a11 only.
struct SymMat2 {
    double a11 = 1.0, a12 = 0.0, a22 = 1.0;

    double min_eigenvalue(int dim) const {
        if (dim == 1) return a11;
        double tr = a11 + a22;
        double disc = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
        return 0.5 * tr - disc;
    }
    double max_abs_entry(int dim) const {
        if (dim == 1) return std::fabs(a11);
        return std::max({std::fabs(a11), std::fabs(a12), std::fabs(a22)});
    }
};

// splitmix64: stateless 64-bit mixer, the one deterministic randomness
// primitive used everywhere (cell values, sample points, phases).
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// Uniform double in [0,1) from 53 high bits.
inline double u01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Small counter-based stream for drawing several values from one seed.
struct RngStream {
    std::uint64_t state;
    explicit RngStream(std::uint64_t seed) : state(splitmix64(seed)) {}
    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double next_u01() { return u01(next_u64()); }
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_u01(); }
};

// FNV-1a over bytes; stable across platforms, used for config hashes.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string to_hex(std::uint64_t v) {
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[15 - i] = digits[(v >> (4 * i)) & 0xf];
    }
    buf[16] = '\0';
    return std::string(buf);
}

// Exact fractional part; exponent alignment makes the subtraction exact.
inline double fract(double t) { return t - std::floor(t); }

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct HorizonExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kpplab
