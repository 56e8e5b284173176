#include "theta/covering.hpp"

#include "theta/parallel.hpp"
#include "theta/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace theta {

namespace {

SpaceSpec canonical(const SpaceSpec& s) {
    if (const auto* w = std::get_if<WeightedLpSpec>(&s.variant())) {
        if ((w->weights.array() == 1.0).all()) return SpaceSpec::ell_p(w->p, w->weights.size());
    }
    return s;
}

void check_partition(const SpaceSpec& space, const std::vector<std::vector<Eigen::Index>>& blocks,
                     bool allow_any_count) {
    if (blocks.empty()) throw std::invalid_argument("covering: empty partition");
    if (!allow_any_count && blocks.size() != 2)
        throw std::invalid_argument("covering: expected exactly two halves");
    std::vector<char> seen(static_cast<size_t>(space.elem_rows()), 0);
    for (const auto& block : blocks) {
        if (block.empty()) throw std::invalid_argument("covering: empty partition block");
        for (Eigen::Index i : block) {
            if (i < 0 || i >= space.elem_rows())
                throw std::invalid_argument("covering: partition index out of range");
            if (seen[static_cast<size_t>(i)]++)
                throw std::invalid_argument("covering: partition blocks overlap");
        }
    }
    for (char c : seen)
        if (!c) throw std::invalid_argument("covering: partition does not exhaust coordinates");
}

}  // namespace

bool same_space(const SpaceSpec& a, const SpaceSpec& b) {
    return canonical(a) == canonical(b);
}

NormCapSet::NormCapSet(BlockProjection projection_, double cap_)
    : projection(std::move(projection_)), cap(cap_) {
    if (!(cap >= 0.0 && cap <= 1.0)) throw std::invalid_argument("covering: cap must be in [0,1]");
}

bool membership(const NormCapSet& a, const Element& f) {
    return membership_slack(a, f) <= kMembershipTol;
}

double membership_slack(const NormCapSet& a, const Element& f) {
    const SpaceSpec space = a.ambient();
    const double ball = space.norm(f) - 1.0;
    const double capped = space.norm(a.projection.apply(f)) - a.cap;
    return std::max(ball, capped);
}

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::block: return "block";
        case Provenance::hilbert: return "hilbert";
        case Provenance::pullback: return "pullback";
    }
    return "?";
}

CoveringFamily::CoveringFamily(SpaceSpec ambient_, std::vector<NormCapSet> sets_,
                               Provenance provenance_)
    : ambient(std::move(ambient_)), sets(std::move(sets_)), provenance(provenance_) {
    if (sets.empty()) throw std::invalid_argument("covering: family needs at least one set");
    for (const auto& s : sets)
        if (!same_space(s.ambient(), ambient))
            throw std::invalid_argument("covering: set ambient mismatch");
}

nlohmann::json CoveringFamily::to_json() const {
    nlohmann::json j;
    j["ambient"] = ambient.to_json();
    nlohmann::json sets_json = nlohmann::json::array();
    for (const auto& s : sets) {
        nlohmann::json sj = s.projection.to_json();
        sj["cap"] = s.cap;
        sets_json.push_back(std::move(sj));
    }
    j["sets"] = sets_json;
    j["provenance"] = provenance_name(provenance);
    return j;
}

CoveringFamily CoveringFamily::from_json(const nlohmann::json& j) {
    const SpaceSpec ambient = SpaceSpec::from_json(j.at("ambient"));
    std::vector<NormCapSet> sets;
    for (const auto& sj : j.at("sets"))
        sets.emplace_back(BlockProjection::from_json(ambient, sj), sj.at("cap").get<double>());
    const std::string prov = j.at("provenance").get<std::string>();
    Provenance p = Provenance::block;
    if (prov == "hilbert")
        p = Provenance::hilbert;
    else if (prov == "pullback")
        p = Provenance::pullback;
    else if (prov != "block")
        throw std::invalid_argument("covering: unknown provenance " + prov);
    return CoveringFamily(ambient, std::move(sets), p);
}

CoveringFamily build_block_covering(const SpaceSpec& space,
                                    const std::vector<std::vector<Eigen::Index>>& partition) {
    if (space.is_schatten() || space.is_bochner())
        throw std::invalid_argument("covering: block coverings live on scalar L_p spaces");
    check_partition(space, partition, true);
    const double n = static_cast<double>(partition.size());
    const double cap = std::pow(n, -1.0 / space.p());
    std::vector<NormCapSet> sets;
    sets.reserve(partition.size());
    for (const auto& block : partition)
        sets.emplace_back(BlockProjection::coord(space, block), cap);
    return CoveringFamily(space, std::move(sets), Provenance::block);
}

CoveringFamily build_hilbert_two_cover(const SpaceSpec& space,
                                       const std::vector<Eigen::Index>& first_half,
                                       const std::vector<Eigen::Index>& second_half) {
    if (!space.is_hilbert_sequence())
        throw std::invalid_argument("covering: two-cover needs l_2 ambient");
    check_partition(space, {first_half, second_half}, false);
    const double cap = 1.0 / std::sqrt(2.0);
    std::vector<NormCapSet> sets;
    sets.emplace_back(BlockProjection::coord(space, first_half), cap);
    sets.emplace_back(BlockProjection::coord(space, second_half), cap);
    return CoveringFamily(space, std::move(sets), Provenance::hilbert);
}

ContractiveMap ContractiveMap::identity(const SpaceSpec& space) {
    return ContractiveMap(Kind::identity, space, space);
}

ContractiveMap ContractiveMap::bochner_scalarization(const SpaceSpec& domain, Eigen::VectorXd e,
                                                     Eigen::VectorXd phi) {
    const auto* spec = std::get_if<BochnerSpec>(&domain.variant());
    if (!spec) throw std::invalid_argument("scalarization: domain must be a Bochner space");
    // reuse the projection-side validation of (e, phi)
    BlockProjection::bochner(domain, e, phi,
                             BlockProjection::full(domain).op());
    const bool unit = (spec->weights.array() == 1.0).all();
    SpaceSpec range = unit ? SpaceSpec::ell_p(spec->p, spec->weights.size())
                           : SpaceSpec::weighted_lp(spec->p, spec->weights);
    ContractiveMap map(Kind::bochner_scalarize, domain, std::move(range));
    map.e_ = std::move(e);
    map.phi_ = std::move(phi);
    return map;
}

Element ContractiveMap::apply(const Element& x) const {
    domain_.check_shape(x);
    if (kind_ == Kind::identity) return x;
    return Element(x * phi_);
}

CoveringFamily pullback_covering(const ContractiveMap& map, const CoveringFamily& range_family,
                                 std::uint64_t check_seed, int check_samples) {
    if (!same_space(range_family.ambient, map.range()))
        throw std::invalid_argument("pullback: family does not live on the map's range");
    // sampled contractivity check
    double worst = 0.0;
    for (const Element& x : sample_sphere(map.domain(), check_seed, check_samples)) {
        const double ratio = map.range().norm(map.apply(x)) - map.domain().norm(x);
        worst = std::max(worst, ratio);
    }
    if (worst > 1e-9) throw std::invalid_argument("pullback: map is not contractive on samples");

    if (map.kind() == ContractiveMap::Kind::identity)
        return CoveringFamily(range_family.ambient, range_family.sets, Provenance::pullback);

    std::vector<NormCapSet> sets;
    sets.reserve(range_family.sets.size());
    for (const auto& s : range_family.sets) {
        const auto& op = s.projection.op();
        BlockProjection::Op scalar_op;
        if (const auto* c = std::get_if<CoordBlock>(&op))
            scalar_op = *c;
        else if (const auto* o = std::get_if<OrthoBlock>(&op))
            scalar_op = *o;
        else
            throw std::invalid_argument("pullback: range sets must use scalar blocks");
        sets.emplace_back(BlockProjection::bochner(map.domain(), map.e(), map.phi(), scalar_op),
                          s.cap);
    }
    return CoveringFamily(map.domain(), std::move(sets), Provenance::pullback);
}

Element bochner_embed(const SpaceSpec& bochner_space, const Element& scalar_f,
                      const Eigen::VectorXd& e) {
    const auto* spec = std::get_if<BochnerSpec>(&bochner_space.variant());
    if (!spec) throw std::invalid_argument("bochner_embed: target must be a Bochner space");
    if (scalar_f.cols() != 1 || scalar_f.rows() != spec->weights.size())
        throw std::invalid_argument("bochner_embed: scalar element shape mismatch");
    if (e.size() != spec->inner_dim)
        throw std::invalid_argument("bochner_embed: inner vector size mismatch");
    const Eigen::VectorXd inner_w = Eigen::VectorXd::Ones(spec->inner_dim);
    if (std::abs(weighted_lp_norm(e, inner_w, spec->inner_p) - 1.0) > 1e-12)
        throw std::invalid_argument("bochner_embed: e must be an inner unit vector");
    return scalar_f * e.transpose();
}

Element bochner_embed(const SpaceSpec& bochner_space, const Element& scalar_f) {
    const auto& spec = std::get<BochnerSpec>(bochner_space.variant());
    Eigen::VectorXd e = Eigen::VectorXd::Zero(spec.inner_dim);
    e[0] = 1.0;
    return bochner_embed(bochner_space, scalar_f, e);
}

BlockProjection bochner_projection(const SpaceSpec& bochner_space, Eigen::VectorXd e,
                                   Eigen::VectorXd phi) {
    return BlockProjection::bochner(bochner_space, std::move(e), std::move(phi),
                                    BlockProjection::full(bochner_space).op());
}

BlockProjection bochner_projection(const SpaceSpec& bochner_space) {
    const auto& spec = std::get<BochnerSpec>(bochner_space.variant());
    Eigen::VectorXd e = Eigen::VectorXd::Zero(spec.inner_dim);
    e[0] = 1.0;
    return bochner_projection(bochner_space, e, e);
}

nlohmann::json CoverReport::to_json() const {
    nlohmann::json j;
    j["checked"] = checked;
    j["violation_count"] = violation_count;
    j["max_slack"] = max_slack;
    j["membership_tol"] = kMembershipTol;
    nlohmann::json v = nlohmann::json::array();
    for (const auto& f : violations) v.push_back(element_to_json(f));
    j["violations"] = v;
    j["analytic"] = {{"checked", analytic_checked},
                     {"max_deviation", analytic_max_dev},
                     {"ok", analytic_ok}};
    return j;
}

CoverReport verify_cover(const CoveringFamily& family, std::uint64_t seed, int count) {
    if (count < 1) throw std::invalid_argument("verify_cover: count must be >= 1");
    const SpaceSpec& space = family.ambient;
    const std::vector<Element> sphere = sample_sphere(space, seed, count);

    std::mt19937_64 radial_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double inv_dim = 1.0 / static_cast<double>(space.flat_dim());
    std::vector<double> radii(sphere.size());
    for (auto& r : radii) r = std::pow(unif(radial_rng), inv_dim);

    const bool analytic = family.provenance != Provenance::pullback;
    const double p = space.p();

    struct Acc {
        long checked = 0;
        long violation_count = 0;
        std::vector<Element> violations;
        double max_slack = -std::numeric_limits<double>::infinity();
        double analytic_max_dev = 0.0;
    };

    auto chunk = [&](std::size_t lo, std::size_t hi, Acc& acc) {
        for (std::size_t i = lo; i < hi; ++i) {
            // caps are tightest on the boundary, so always stress radius 1 too
            for (const double r : {radii[i], 1.0}) {
                const Element f = r * sphere[i];
                double best = std::numeric_limits<double>::infinity();
                for (const auto& s : family.sets)
                    best = std::min(best, membership_slack(s, f));
                ++acc.checked;
                acc.max_slack = std::max(acc.max_slack, best);
                if (best > kMembershipTol) {
                    ++acc.violation_count;
                    if (acc.violations.size() < 16) acc.violations.push_back(f);
                }
            }
            if (analytic) {
                const Element& f = sphere[i];
                double sum = 0.0;
                for (const auto& s : family.sets)
                    sum += std::pow(space.norm(s.projection.apply(f)), p);
                acc.analytic_max_dev =
                    std::max(acc.analytic_max_dev, std::abs(sum - std::pow(space.norm(f), p)));
            }
        }
    };
    auto combine = [](Acc a, const Acc& b) {
        a.checked += b.checked;
        a.violation_count += b.violation_count;
        for (const auto& f : b.violations)
            if (a.violations.size() < 16) a.violations.push_back(f);
        a.max_slack = std::max(a.max_slack, b.max_slack);
        a.analytic_max_dev = std::max(a.analytic_max_dev, b.analytic_max_dev);
        return a;
    };
    const Acc acc = parallel_reduce(sphere.size(), Acc{}, chunk, combine);

    CoverReport report;
    report.checked = acc.checked;
    report.violation_count = acc.violation_count;
    report.violations = acc.violations;
    report.max_slack = acc.max_slack;
    report.analytic_checked = analytic;
    report.analytic_max_dev = acc.analytic_max_dev;
    report.analytic_ok = !analytic || acc.analytic_max_dev <= 1e-10;
    return report;
}

}  // namespace theta
