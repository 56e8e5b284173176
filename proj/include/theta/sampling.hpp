#ifndef THETA_SAMPLING_HPP
#define THETA_SAMPLING_HPP

#include "theta/space.hpp"
#include "theta/subspace.hpp"

#include <random>

namespace theta {

// Unit-sphere samples, deterministic for a fixed seed. Uniform (cone measure)
// on the l_p sphere via the p-generalized Gaussian construction; Schatten and
// Bochner samples are norm-normalized Gaussians, which is Haar-like but not
// uniform.
std::vector<Element> sample_sphere(const SpaceSpec& space, std::uint64_t seed, int count);

// Ball samples: sphere directions at radius u^(1/d), d the flat dimension.
std::vector<Element> sample_ball(const SpaceSpec& space, std::uint64_t seed, int count);

// Single draws against a caller-owned generator.
Element sample_sphere_one(const SpaceSpec& space, std::mt19937_64& rng);
// Unit vector of the ambient p-sphere lying in Y.
Element sample_subspace_sphere_one(const SpaceSpec& space, const Subspace& y,
                                   std::mt19937_64& rng);

}  // namespace theta

#endif
