#pragma once

#include <cstdint>
#include <random>

#include "ewd/geom.hpp"

// Seeded random geometry used by the verification drivers and tests.

namespace ewd {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

struct BoxSampler {
    double center_lo = -10.0, center_hi = 10.0;
    double size_lo = 0.1, size_hi = 20.0;
    double theta_lo = -3.14159265358979323846, theta_hi = 3.14159265358979323846;

    OBox5 operator()(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> uc(center_lo, center_hi);
        std::uniform_real_distribution<double> us(size_lo, size_hi);
        std::uniform_real_distribution<double> ut(theta_lo, theta_hi);
        return OBox5{uc(rng), uc(rng), us(rng), us(rng), ut(rng)};
    }
};

struct EdgeSampler {
    double lo = -3.0, hi = 3.0;

    DirectedEdge operator()(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> u(lo, hi);
        DirectedEdge e{{u(rng), u(rng)}, {u(rng), u(rng)}};
        while (e.length() < 1e-6) {
            e = DirectedEdge{{u(rng), u(rng)}, {u(rng), u(rng)}};
        }
        return e;
    }
};

}  // namespace ewd
