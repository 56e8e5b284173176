#include "theta/inradius.hpp"

#include "theta/sampling.hpp"
#include "theta/trust_region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace theta {

namespace {

bool euclidean_flat(const SpaceSpec& s) {
    if (s.is_hilbert_sequence()) return true;
    if (const auto* b = std::get_if<BochnerSpec>(&s.variant()))
        return b->p == 2.0 && b->inner_p == 2.0 && (b->weights.array() == 1.0).all();
    return false;
}

Element zero_element(const SpaceSpec& s) { return Element::Zero(s.elem_rows(), s.elem_cols()); }

}  // namespace

std::string rigor_name(Rigor r) {
    switch (r) {
        case Rigor::analytic: return "analytic";
        case Rigor::exact_hilbert: return "exact-hilbert";
        case Rigor::heuristic: return "heuristic";
    }
    return "?";
}

std::string cert_status_name(CertStatus s) {
    switch (s) {
        case CertStatus::verified: return "verified";
        case CertStatus::failed: return "failed";
        case CertStatus::heuristic: return "heuristic";
    }
    return "?";
}

nlohmann::json SectionCertificate::to_json() const {
    nlohmann::json j;
    j["set"] = {{"projection", set.projection.to_json()}, {"cap", set.cap}};
    j["ambient"] = set.ambient().to_json();
    j["center"] = element_to_json(center);
    j["subspace"] = subspace.to_json();
    j["radius"] = radius;
    j["status"] = cert_status_name(status);
    j["rigor"] = rigor_name(rigor);
    j["max_ball_norm"] = max_ball_norm;
    j["max_cap_norm"] = max_cap_norm;
    j["tolerance"] = kCertTol;
    return j;
}

nlohmann::json RefutationWitness::to_json() const {
    nlohmann::json j;
    j["set"] = {{"projection", set.projection.to_json()}, {"cap", set.cap}};
    j["ambient"] = set.ambient().to_json();
    j["center"] = element_to_json(center);
    j["subspace"] = subspace.to_json();
    j["radius"] = radius;
    j["status"] = status == WitnessStatus::refuted ? "refuted" : "inconclusive";
    if (!reason.empty()) j["reason"] = reason;
    if (direction.size() > 0) j["direction"] = element_to_json(direction);
    j["attained"] = attained;
    j["certified_bound"] = certified_bound;
    j["shifted_norm"] = shifted_norm;
    j["tolerance"] = kCertTol;
    return j;
}

SectionCertificate certify_lower(const NormCapSet& a, const Element& x, const Subspace& y,
                                 double r, int d_min, const AscentConfig& cfg) {
    const SpaceSpec space = a.ambient();
    space.check_shape(x);
    if (!same_space(y.ambient(), space))
        throw std::invalid_argument("certify_lower: subspace lives in a different space");
    if (!(r > 0.0)) throw std::invalid_argument("certify_lower: radius must be positive");
    if (y.dim() < d_min)
        throw std::invalid_argument("certify_lower: subspace dimension below d_min");

    SectionCertificate cert(a, x, y, r);

    const bool x_zero = flatten(x).cwiseAbs().maxCoeff() == 0.0;
    if (x_zero && y.codim() == 0) {
        // r B ⊂ A iff r <= 1 and r ||P|| <= cap; ||P|| is 0 or 1 here
        cert.rigor = Rigor::analytic;
        cert.max_ball_norm = r;
        cert.max_cap_norm = a.projection.is_zero() ? 0.0 : r;
        cert.status = (cert.max_ball_norm <= 1.0 + kCertTol &&
                       cert.max_cap_norm <= a.cap + kCertTol)
                          ? CertStatus::verified
                          : CertStatus::failed;
        return cert;
    }

    if (euclidean_flat(space)) {
        const Eigen::VectorXd xf = flatten(x);
        const Eigen::MatrixXd& basis = y.basis();
        // max over the unit ball of Y of ||x + r u||_2 in closed form
        const double bx = (basis.transpose() * xf).norm();
        cert.max_ball_norm = std::sqrt(xf.squaredNorm() + 2.0 * r * bx + r * r);
        // the capped seminorm maximum is a trust-region subproblem
        const Eigen::MatrixXd proj = a.projection.matrix();
        const Eigen::VectorXd w = proj * xf;
        const Eigen::MatrixXd m = proj * basis;
        const SphereQuadMax q =
            max_quadratic_on_sphere((r * r) * (m.transpose() * m), r * (m.transpose() * w));
        cert.max_cap_norm = std::sqrt(std::max(0.0, w.squaredNorm() + q.value));
        cert.worst_direction = unflatten(space, basis * q.arg);
        cert.rigor = Rigor::exact_hilbert;
        cert.status = (cert.max_ball_norm <= 1.0 + kCertTol &&
                       cert.max_cap_norm <= a.cap + kCertTol)
                          ? CertStatus::verified
                          : CertStatus::failed;
        return cert;
    }

    AscentConfig ball_cfg = cfg;
    AscentConfig cap_cfg = cfg;
    cap_cfg.seed = cfg.seed ^ 0x517cc1b727220a95ULL;
    const AscentOut ball = ascend_norm_max(space, nullptr, x, r, y, ball_cfg);
    const AscentOut capped = ascend_norm_max(space, &a.projection, x, r, y, cap_cfg);
    cert.max_ball_norm = ball.best;
    cert.max_cap_norm = capped.best;
    cert.worst_direction = capped.arg;
    cert.rigor = Rigor::heuristic;
    // ascent maximizers are genuine points of B ∩ Y, so exceeding a bound is a
    // real violation; staying below is only evidence
    cert.status = (ball.best > 1.0 + kCertTol || capped.best > a.cap + kCertTol)
                      ? CertStatus::failed
                      : CertStatus::heuristic;
    return cert;
}

RefutationWitness refute_hilbert(const NormCapSet& a, const Element& x, const Subspace& y,
                                 double r) {
    const SpaceSpec space = a.ambient();
    if (!euclidean_flat(space))
        throw std::invalid_argument("refute_hilbert: needs a Euclidean-flat ambient");
    if (!same_space(y.ambient(), space))
        throw std::invalid_argument("refute_hilbert: subspace lives in a different space");
    space.check_shape(x);
    if (!(r > a.cap)) throw std::invalid_argument("refute_hilbert: requires r > cap");

    RefutationWitness w(a, x, y, r);

    // Z = Y ∩ range(P), where the adversarial direction must live
    const Eigen::MatrixXd range = a.projection.range_basis();
    const Eigen::MatrixXd& basis = y.basis();
    const Eigen::MatrixXd off_range = basis - range * (range.transpose() * basis);
    const Eigen::MatrixXd coeffs = null_space_basis(off_range, basis.cols());
    const Eigen::MatrixXd z = basis * coeffs;  // orthonormal columns
    if (z.cols() < 2) {
        w.status = WitnessStatus::inconclusive;
        w.reason = "Y ∩ range(P) has dimension < 2";
        return w;
    }

    const Eigen::VectorXd px = flatten(a.projection.apply(x));
    const Eigen::VectorXd qc = z.transpose() * px;
    Eigen::VectorXd coeff;
    if (qc.norm() <= 1e-13 * std::max(1.0, px.norm())) {
        coeff = Eigen::VectorXd::Zero(z.cols());
        coeff[0] = 1.0;
    } else {
        const Eigen::VectorXd qhat = qc / qc.norm();
        Eigen::Index j = 0;
        qhat.cwiseAbs().minCoeff(&j);
        coeff = -qhat[j] * qhat;
        coeff[j] += 1.0;
        coeff.normalize();
    }
    const Element u = unflatten(space, z * coeff);

    w.direction = u;
    w.attained = space.norm(a.projection.apply(x + r * u));
    w.certified_bound = std::sqrt(px.squaredNorm() + r * r);
    w.shifted_norm = space.norm(x + r * u);
    if (w.attained > a.cap + kCertTol) {
        w.status = WitnessStatus::refuted;
    } else {
        w.status = WitnessStatus::inconclusive;
        w.reason = "margin below tolerance";
    }
    return w;
}

RefutationWitness refute_lp(const NormCapSet& a, const Element& x, const Subspace& y, double r,
                            double n_pieces) {
    const SpaceSpec space = a.ambient();
    if (space.is_schatten() || space.is_bochner())
        throw std::invalid_argument("refute_lp: needs a scalar L_p ambient");
    if (!same_space(y.ambient(), space))
        throw std::invalid_argument("refute_lp: subspace lives in a different space");
    space.check_shape(x);
    const auto* block = std::get_if<CoordBlock>(&a.projection.op());
    if (!block) throw std::invalid_argument("refute_lp: cap must be a coordinate block");
    if (!(n_pieces >= 1.0)) throw std::invalid_argument("refute_lp: n must be >= 1");
    const double p = space.p();
    if (!(r > std::pow(n_pieces, -1.0 / p)))
        throw std::invalid_argument("refute_lp: requires r > n^(-1/p)");

    RefutationWitness w(a, x, y, r);

    const Eigen::Index m = y.functionals().rows();
    if (static_cast<Eigen::Index>(block->indices.size()) <= m) {
        w.status = WitnessStatus::inconclusive;
        w.reason = "block has no more coordinates than functionals";
        return w;
    }

    const Element v = a.projection.apply(x);
    const Eigen::VectorXd weights = space.outer_weights();

    // greedy smallest-mass selection, lowest index on ties
    std::vector<std::pair<double, Eigen::Index>> masses;
    masses.reserve(block->indices.size());
    double vpow = 0.0;
    for (Eigen::Index i : block->indices) {
        const double mass = weights[i] * std::pow(std::abs(v(i, 0)), p);
        masses.emplace_back(mass, i);
        vpow += mass;
    }
    std::sort(masses.begin(), masses.end());
    const Eigen::Index support = m + 1;

    double a_mass = 0.0;
    std::vector<Eigen::Index> s_idx(static_cast<size_t>(support));
    for (Eigen::Index l = 0; l < support; ++l) {
        a_mass += masses[static_cast<size_t>(l)].first;
        s_idx[static_cast<size_t>(l)] = masses[static_cast<size_t>(l)].second;
    }
    const double a_val = std::pow(a_mass, 1.0 / p);

    // kernel of the m x (m+1) system: functionals restricted to the support
    Eigen::MatrixXd phi_s(m, support);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index l = 0; l < support; ++l)
            phi_s(i, l) = y.functionals()(i, s_idx[static_cast<size_t>(l)]);
    const Eigen::MatrixXd kernel = null_space_basis(phi_s, support);
    Eigen::VectorXd wf = Eigen::VectorXd::Zero(space.flat_dim());
    for (Eigen::Index l = 0; l < support; ++l) wf[s_idx[static_cast<size_t>(l)]] = kernel(l, 0);
    const double wn = weighted_lp_norm(wf, weights, p);
    const Element u = unflatten(space, wf / wn);

    w.direction = u;
    w.shifted_norm = space.norm(x + r * u);
    w.attained = space.norm(a.projection.apply(x + r * u));

    if (a_val >= r) {
        w.status = WitnessStatus::inconclusive;
        w.reason = "support mass a exceeds the radius";
        return w;
    }
    const double f_val = vpow - a_mass + std::pow(r - a_val, p);
    w.certified_bound = std::pow(f_val, 1.0 / p);
    const double threshold = std::max(1.0 / n_pieces, std::pow(a.cap, p));
    if (f_val <= threshold + 1e-12) {
        w.status = WitnessStatus::inconclusive;
        w.reason = "F(a) does not clear 1/n in the finite surrogate";
        return w;
    }
    w.status = WitnessStatus::refuted;
    return w;
}

bool recheck_witness(const RefutationWitness& w) {
    if (!w.refuted() || w.direction.size() == 0) return false;
    const SpaceSpec space = w.set.ambient();
    if (!w.subspace.contains(flatten(w.direction), 1e-10)) return false;
    if (std::abs(space.norm(w.direction) - 1.0) > 1e-10) return false;
    const Element shifted = w.center + w.radius * w.direction;
    if (space.norm(w.set.projection.apply(shifted)) <= w.set.cap + kCertTol) return false;
    return !membership(w.set, shifted);
}

long certificate_violations_by_sampling(const SectionCertificate& cert, int samples,
                                        std::uint64_t seed) {
    const SpaceSpec space = cert.set.ambient();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double inv_dim = 1.0 / static_cast<double>(cert.subspace.dim());
    long violations = 0;
    for (int i = 0; i < samples; ++i) {
        const Element dir = sample_subspace_sphere_one(space, cert.subspace, rng);
        const double rho = std::pow(unif(rng), inv_dim);
        if (!membership(cert.set, cert.center + cert.radius * rho * dir)) ++violations;
    }
    return violations;
}

nlohmann::json InradiusInterval::to_json() const {
    nlohmann::json j;
    j["lower"] = lower;
    j["upper"] = upper;
    j["lower_rigor"] = rigor_name(lower_rigor);
    j["upper_vacuous"] = upper_vacuous;
    j["probe_refuted"] = probe_refuted;
    j["probe_inconclusive"] = probe_inconclusive;
    return j;
}

InradiusInterval estimate_inradius(const NormCapSet& a, int codim_budget,
                                   const InradiusConfig& cfg) {
    const SpaceSpec space = a.ambient();
    if (codim_budget < 0) throw std::invalid_argument("estimate_inradius: budget must be >= 0");
    if (space.flat_dim() - codim_budget < cfg.d_min)
        throw std::invalid_argument("estimate_inradius: budget leaves less than d_min dimensions");

    InradiusInterval out;
    const double analytic_lower = a.projection.is_zero() ? 1.0 : std::min(1.0, a.cap);
    {
        const SectionCertificate cert = certify_lower(a, zero_element(space),
                                                      Subspace::full(space), analytic_lower,
                                                      cfg.d_min, cfg.ascent);
        out.lower = cert.verified() ? analytic_lower : 0.0;
        out.lower_rigor = Rigor::analytic;
    }

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto random_member = [&]() -> std::optional<Element> {
        const double inv_dim = 1.0 / static_cast<double>(space.flat_dim());
        for (int tries = 0; tries < 256; ++tries) {
            Element cand = std::pow(unif(rng), inv_dim) * sample_sphere_one(space, rng);
            if (membership(a, cand)) return cand;
        }
        return std::nullopt;
    };
    auto random_subspace = [&]() {
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd funcs(codim_budget, space.flat_dim());
        for (Eigen::Index i = 0; i < funcs.rows(); ++i)
            for (Eigen::Index k = 0; k < funcs.cols(); ++k) funcs(i, k) = normal(rng);
        return Subspace::from_kernel(space, funcs);
    };

    // optional random (x, Y) certificate search; exact rigor only
    if (cfg.cert_probes > 0 && euclidean_flat(space) && codim_budget > 0) {
        double best = out.lower;
        for (int probe = 0; probe < cfg.cert_probes; ++probe) {
            const auto x = random_member();
            if (!x) continue;
            const Subspace y = random_subspace();
            auto verified_at = [&](double r) {
                return certify_lower(a, *x, y, r, cfg.d_min, cfg.ascent).verified();
            };
            if (!verified_at(best)) continue;
            double lo = best, hi = 1.0;
            if (verified_at(hi)) {
                best = 1.0;
                continue;
            }
            while (hi - lo > cfg.bisect_rel_tol * std::max(lo, 1e-6))
                (verified_at(0.5 * (lo + hi)) ? lo : hi) = 0.5 * (lo + hi);
            if (lo > best) {
                best = lo;
                out.lower_rigor = Rigor::exact_hilbert;
            }
        }
        out.lower = best;
    }

    const bool lp_refutable = !space.is_schatten() && !space.is_bochner() &&
                              std::holds_alternative<CoordBlock>(a.projection.op());
    const bool hilbert_refutable = euclidean_flat(space);
    auto refute_at = [&](const Element& x, const Subspace& y, double r) -> RefutationWitness {
        if (cfg.refuter == RefuterChoice::hilbert ||
            (cfg.refuter == RefuterChoice::automatic && hilbert_refutable))
            return refute_hilbert(a, x, y, r);
        if (cfg.refuter == RefuterChoice::lp ||
            (cfg.refuter == RefuterChoice::automatic && lp_refutable))
            return refute_lp(a, x, y, r, std::pow(a.cap, -space.p()));
        throw std::invalid_argument("estimate_inradius: no refuter applies to this set");
    };

    if (out.lower >= 1.0) {
        out.upper = 1.0;
        return out;
    }
    const Element x0 = zero_element(space);
    const Subspace y0 = Subspace::full(space);
    auto refuted = [&](double r) { return refute_at(x0, y0, r).refuted(); };

    double lo = out.lower, hi = 1.0;
    if (!refuted(hi)) {
        out.upper = 1.0;
        out.upper_vacuous = true;
    } else {
        while (hi - lo > cfg.bisect_rel_tol * lo) (refuted(0.5 * (lo + hi)) ? hi : lo) = 0.5 * (lo + hi);
        out.upper = hi;
    }

    // random (x, Y) refutation probes at a radius just above the interval
    if (cfg.refute_probes > 0 && codim_budget > 0 && !out.upper_vacuous) {
        const double r_probe = std::max(out.upper, a.cap * (1.0 + 1e-3));
        for (int probe = 0; probe < cfg.refute_probes; ++probe) {
            const auto x = random_member();
            if (!x) {
                ++out.probe_inconclusive;
                continue;
            }
            const RefutationWitness w = refute_at(*x, random_subspace(), r_probe);
            if (w.refuted() && recheck_witness(w))
                ++out.probe_refuted;
            else
                ++out.probe_inconclusive;
        }
    }
    return out;
}

SectionCertificate lift_certificate(const ContractiveMap& map, const NormCapSet& domain_set,
                                    const SectionCertificate& range_cert, int d_min,
                                    const AscentConfig& cfg) {
    if (map.kind() == ContractiveMap::Kind::identity)
        return certify_lower(domain_set, range_cert.center, range_cert.subspace,
                             range_cert.radius, d_min, cfg);
    const SpaceSpec& domain = map.domain();
    if (!same_space(domain_set.ambient(), domain))
        throw std::invalid_argument("lift_certificate: set does not live on the map's domain");
    const Element x_dom = bochner_embed(domain, range_cert.center, map.e());
    // W = P^{-1}(Z): kernel of psi_j ∘ scalarize, coefficients psi_j phi^T
    const Eigen::MatrixXd& range_funcs = range_cert.subspace.functionals();
    Eigen::MatrixXd composed(range_funcs.rows(), domain.flat_dim());
    for (Eigen::Index j = 0; j < range_funcs.rows(); ++j) {
        const Element outer = range_funcs.row(j).transpose() * map.phi().transpose();
        composed.row(j) = flatten(outer).transpose();
    }
    const Subspace w = Subspace::from_kernel(domain, composed);
    return certify_lower(domain_set, x_dom, w, range_cert.radius, d_min, cfg);
}

}  // namespace theta
