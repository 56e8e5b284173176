#ifndef THETA_ASCENT_HPP
#define THETA_ASCENT_HPP

#include "theta/projection.hpp"
#include "theta/subspace.hpp"

#include <cstdint>

namespace theta {

struct AscentConfig {
    int restarts = 32;
    int max_iters = 500;
    std::uint64_t seed = 7;
};

struct AscentOut {
    double best = 0.0;
    Element arg;
    long iters = 0;
};

// Maximize ||W (x + r u)|| over unit u in Y (ambient norm) by normalized
// gradient ascent with step halving and multi-restart; W optional. The result
// is a certified lower bound on the true maximum: arg is a genuine point.
AscentOut ascend_norm_max(const SpaceSpec& space, const BlockProjection* w, const Element& x,
                          double r, const Subspace& y, const AscentConfig& cfg);

}  // namespace theta

#endif
