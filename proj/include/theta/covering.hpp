#ifndef THETA_COVERING_HPP
#define THETA_COVERING_HPP

#include "theta/projection.hpp"
#include "theta/space.hpp"

#include <cstdint>
#include <string>

namespace theta {

// Absolute tolerance on set membership, also the slack unit in reports.
inline constexpr double kMembershipTol = 1e-12;

// True when the two specs induce the same norm (EllP is WeightedLp with unit
// weights).
bool same_space(const SpaceSpec& a, const SpaceSpec& b);

// {f : ||f|| <= 1 and ||P f|| <= cap} — the only convex-set shape the
// coverings here use.
struct NormCapSet {
    NormCapSet(BlockProjection projection_, double cap_);

    SpaceSpec ambient() const { return projection.ambient(); }

    BlockProjection projection;
    double cap;
};

bool membership(const NormCapSet& a, const Element& f);
// max(||f|| - 1, ||P f|| - cap); membership up to tolerance iff <= tol.
double membership_slack(const NormCapSet& a, const Element& f);

enum class Provenance { block, hilbert, pullback };
std::string provenance_name(Provenance p);

struct CoveringFamily {
    CoveringFamily(SpaceSpec ambient_, std::vector<NormCapSet> sets_, Provenance provenance_);

    SpaceSpec ambient;
    std::vector<NormCapSet> sets;
    Provenance provenance;

    nlohmann::json to_json() const;
    static CoveringFamily from_json(const nlohmann::json& j);
};

// n block caps at n^(-1/p); covers by the pigeonhole identity.
CoveringFamily build_block_covering(const SpaceSpec& space,
                                    const std::vector<std::vector<Eigen::Index>>& partition);

// Two caps at 1/sqrt(2) over an orthogonal coordinate split of l_2^N.
CoveringFamily build_hilbert_two_cover(const SpaceSpec& space,
                                       const std::vector<Eigen::Index>& first_half,
                                       const std::vector<Eigen::Index>& second_half);

// A linear norm-decreasing map between surrogate spaces, the P of the
// monotonicity lemma.
class ContractiveMap {
  public:
    enum class Kind { identity, bochner_scalarize };

    static ContractiveMap identity(const SpaceSpec& space);
    // F -> (phi(F(omega)))_omega, from a Bochner space onto its scalar factor.
    static ContractiveMap bochner_scalarization(const SpaceSpec& domain, Eigen::VectorXd e,
                                                Eigen::VectorXd phi);

    Kind kind() const { return kind_; }
    const SpaceSpec& domain() const { return domain_; }
    const SpaceSpec& range() const { return range_; }
    const Eigen::VectorXd& e() const { return e_; }
    const Eigen::VectorXd& phi() const { return phi_; }

    Element apply(const Element& x) const;

  private:
    ContractiveMap(Kind kind, SpaceSpec domain, SpaceSpec range)
        : kind_(kind), domain_(std::move(domain)), range_(std::move(range)) {}

    Kind kind_;
    SpaceSpec domain_;
    SpaceSpec range_;
    Eigen::VectorXd e_, phi_;
};

// A_k := {x in B_X : P x in B_k}. Contractivity is spot-checked on sphere
// samples; a violation beyond 1e-9 rejects the map.
CoveringFamily pullback_covering(const ContractiveMap& map, const CoveringFamily& range_family,
                                 std::uint64_t check_seed = 20240901, int check_samples = 256);

// J(f)(omega) = f(omega) e, isometric for a unit e.
Element bochner_embed(const SpaceSpec& bochner_space, const Element& scalar_f,
                      const Eigen::VectorXd& e);
Element bochner_embed(const SpaceSpec& bochner_space, const Element& scalar_f);

// P(F)(omega) = phi(F(omega)) e as a norm-one projection of the Bochner space.
BlockProjection bochner_projection(const SpaceSpec& bochner_space, Eigen::VectorXd e,
                                   Eigen::VectorXd phi);
BlockProjection bochner_projection(const SpaceSpec& bochner_space);

struct CoverReport {
    long checked = 0;
    long violation_count = 0;
    std::vector<Element> violations;  // capped at 16 kept samples
    double max_slack = 0.0;           // max over samples of min-set slack
    bool analytic_checked = false;    // pigeonhole identity on the samples
    double analytic_max_dev = 0.0;
    bool analytic_ok = true;

    bool covered() const { return violation_count == 0; }
    nlohmann::json to_json() const;
};

// Membership sweep over `count` ball points plus the same directions on the
// sphere; violations are data, not errors.
CoverReport verify_cover(const CoveringFamily& family, std::uint64_t seed, int count);

}  // namespace theta

#endif
