#include "theta/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace theta {

namespace {

// |g| = W^(1/p) with W ~ Gamma(1/p) has density proportional to exp(-|g|^p),
// so g / ||g||_p is uniform on the l_p sphere.
Eigen::VectorXd generalized_gaussian(Eigen::Index n, double p, std::mt19937_64& rng) {
    std::gamma_distribution<double> gamma(1.0 / p, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mag = std::pow(gamma(rng), 1.0 / p);
        g[i] = unif(rng) < 0.5 ? -mag : mag;
    }
    return g;
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
    return g;
}

}  // namespace

Element sample_sphere_one(const SpaceSpec& space, std::mt19937_64& rng) {
    const auto& v = space.variant();
    if (const auto* e = std::get_if<EllPSpec>(&v)) {
        Eigen::VectorXd g = generalized_gaussian(e->dim, e->p, rng);
        g /= weighted_lp_norm(g, Eigen::VectorXd::Ones(e->dim), e->p);
        return g;
    }
    if (const auto* w = std::get_if<WeightedLpSpec>(&v)) {
        // uniform on the unweighted sphere, then the coordinate-wise isometry
        // into the weighted space
        Eigen::VectorXd g = generalized_gaussian(w->weights.size(), w->p, rng);
        g /= weighted_lp_norm(g, Eigen::VectorXd::Ones(w->weights.size()), w->p);
        g.array() *= w->weights.array().pow(-1.0 / w->p);
        return g;
    }
    if (const auto* s = std::get_if<SchattenSpec>(&v)) {
        Element g = gaussian_matrix(s->rows, s->cols, rng);
        return g / space.norm(g);
    }
    const auto& b = std::get<BochnerSpec>(v);
    Element g = gaussian_matrix(b.weights.size(), b.inner_dim, rng);
    return g / space.norm(g);
}

std::vector<Element> sample_sphere(const SpaceSpec& space, std::uint64_t seed, int count) {
    if (count < 1) throw std::invalid_argument("sample_sphere: count must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<Element> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(sample_sphere_one(space, rng));
    return out;
}

std::vector<Element> sample_ball(const SpaceSpec& space, std::uint64_t seed, int count) {
    if (count < 1) throw std::invalid_argument("sample_ball: count must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double inv_dim = 1.0 / static_cast<double>(space.flat_dim());
    std::vector<Element> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        Element s = sample_sphere_one(space, rng);
        out.push_back(std::pow(unif(rng), inv_dim) * s);
    }
    return out;
}

Element sample_subspace_sphere_one(const SpaceSpec& space, const Subspace& y,
                                   std::mt19937_64& rng) {
    if (y.dim() == 0) throw std::invalid_argument("sample: subspace is trivial");
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(y.dim());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    Element u = unflatten(space, y.basis() * z);
    const double n = space.norm(u);
    if (n == 0.0) return sample_subspace_sphere_one(space, y, rng);
    return u / n;
}

}  // namespace theta
