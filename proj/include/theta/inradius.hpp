#ifndef THETA_INRADIUS_HPP
#define THETA_INRADIUS_HPP

#include "theta/ascent.hpp"
#include "theta/covering.hpp"
#include "theta/subspace.hpp"

#include <optional>
#include <string>

namespace theta {

// Tolerance on certificate bounds and witness margins.
inline constexpr double kCertTol = 1e-9;

enum class Rigor { analytic, exact_hilbert, heuristic };
enum class CertStatus { verified, failed, heuristic };

std::string rigor_name(Rigor r);
std::string cert_status_name(CertStatus s);

// Outcome of checking x + r (B ∩ Y) ⊂ A. The maxima are over unit u in Y of
// ||x + r u|| and ||P (x + r u)||; containment needs both under their bounds.
struct SectionCertificate {
    SectionCertificate(NormCapSet set_, Element center_, Subspace subspace_, double radius_)
        : set(std::move(set_)), center(std::move(center_)), subspace(std::move(subspace_)),
          radius(radius_) {}

    NormCapSet set;
    Element center;
    Subspace subspace;
    double radius = 0.0;

    CertStatus status = CertStatus::failed;
    Rigor rigor = Rigor::heuristic;
    double max_ball_norm = 0.0;
    double max_cap_norm = 0.0;
    Element worst_direction;  // attains the binding maximum; empty if analytic

    bool verified() const { return status == CertStatus::verified; }
    nlohmann::json to_json() const;
};

// Rigor is chosen from the data: analytic for x = 0 with full Y, exact via the
// trust-region subproblem in Euclidean-flat ambients, multi-restart ascent
// otherwise (status `heuristic` unless a concrete violation is found).
SectionCertificate certify_lower(const NormCapSet& a, const Element& x, const Subspace& y,
                                 double r, int d_min = 2, const AscentConfig& cfg = {});

enum class WitnessStatus { refuted, inconclusive };

struct RefutationWitness {
    RefutationWitness(NormCapSet set_, Element center_, Subspace subspace_, double radius_)
        : set(std::move(set_)), center(std::move(center_)), subspace(std::move(subspace_)),
          radius(radius_) {}

    NormCapSet set;
    Element center;
    Subspace subspace;
    double radius = 0.0;

    WitnessStatus status = WitnessStatus::inconclusive;
    std::string reason;        // set when inconclusive
    Element direction;         // unit u in Y with x + r u outside the set
    double attained = 0.0;     // the violating seminorm value ||P(x + r u)||
    double certified_bound = 0.0;
    double shifted_norm = 0.0;  // ||x + r u||

    bool refuted() const { return status == WitnessStatus::refuted; }
    nlohmann::json to_json() const;
};

// Hilbert-space refuter: picks unit u in Y ∩ range(P) orthogonal to P x, so
// ||P(x + r u)|| = sqrt(||P x||^2 + r^2) >= r > cap.
RefutationWitness refute_hilbert(const NormCapSet& a, const Element& x, const Subspace& y,
                                 double r);

// L_p refuter: null-space direction supported on the m+1 smallest-mass block
// coordinates; succeeds when F(a) = ||v||^p - a^p + (r-a)^p clears 1/n.
RefutationWitness refute_lp(const NormCapSet& a, const Element& x, const Subspace& y, double r,
                            double n_pieces);

// Independent re-check of a witness through `membership` and the subspace.
bool recheck_witness(const RefutationWitness& w);

// Count of sampled u in B ∩ Y violating membership(A, x + r u); zero for a
// sound verified certificate.
long certificate_violations_by_sampling(const SectionCertificate& cert, int samples,
                                        std::uint64_t seed);

enum class RefuterChoice { automatic, hilbert, lp };

struct InradiusConfig {
    double bisect_rel_tol = 1e-4;
    int cert_probes = 0;    // random (x, Y) certificate search, exact ambients only
    int refute_probes = 0;  // random (x, Y) refutations at the final upper bound
    int d_min = 2;
    std::uint64_t seed = 1;
    RefuterChoice refuter = RefuterChoice::automatic;
    AscentConfig ascent;
};

struct InradiusInterval {
    double lower = 0.0;
    double upper = 1.0;
    Rigor lower_rigor = Rigor::analytic;
    bool upper_vacuous = false;  // no radius could be refuted
    long probe_refuted = 0;
    long probe_inconclusive = 0;

    nlohmann::json to_json() const;
};

InradiusInterval estimate_inradius(const NormCapSet& a, int codim_budget,
                                   const InradiusConfig& cfg = {});

// Lift of a range-space certificate through a contractive map onto the
// pullback set: center J(y), subspace the kernel of the composed functionals.
SectionCertificate lift_certificate(const ContractiveMap& map, const NormCapSet& domain_set,
                                    const SectionCertificate& range_cert, int d_min = 2,
                                    const AscentConfig& cfg = {});

}  // namespace theta

#endif
