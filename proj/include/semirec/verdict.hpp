#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semirec/semigroup.hpp"

namespace semirec {

enum class Status { CertifiedYes, CertifiedNo, Inconclusive };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::CertifiedYes: return "certified-yes";
    case Status::CertifiedNo: return "certified-no";
    case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

/// What a no-certificate claims about the invariant set S.
///  WanderingExclusion: every word of length `closure_depth` maps the probe
///    box into S (so every longer word does too).
///  LeadExclusion: the single lead word maps the probe box into S.
///  NoChain: the lead word maps the whole space (all of R^n) into S, so every
///    chain step after the first lands within epsilon of S.
enum class CertificateKind { WanderingExclusion, LeadExclusion, NoChain };

/// Re-checkable invariant-set data backing a CertifiedNo (or a certified
/// no-chain claim): S absorbs the images and every generator maps S into S,
/// while S stays away from the target neighborhood.
struct InvariantSetCertificate {
    CertificateKind kind = CertificateKind::LeadExclusion;
    std::vector<Interval> set_parts; // S as a finite union of 1-D intervals
    Word lead;                       // for LeadExclusion / NoChain
    int closure_depth = 1;           // for WanderingExclusion
    IntervalBox probe;               // U (unused for NoChain)
    Point target;                    // the point/cell the chain or word must avoid
    double target_radius = 0.0;      // open-ball radius around target (0 = bare point)
    double epsilon = 0.0;            // chain slack the certificate covers
    double separation = 0.0;         // measured dist(target, S)
};

/// Re-run every interval fact of the certificate. Returns false (with a
/// reason) instead of throwing on ordinary validation failures.
bool validate_certificate(const GeneratorSystem& sys, const InvariantSetCertificate& cert,
                          std::string* why = nullptr);

/// Tri-state answer to a semi-decidable membership question. A CertifiedYes
/// carries a witness that replays; a CertifiedNo carries a certificate that
/// re-validates; anything else is Inconclusive and names its budget.
struct Verdict {
    Status status = Status::Inconclusive;
    std::string note;    // reason, or budget disclosure for Inconclusive
    std::string budgets; // what was searched
    std::vector<Point> witness_points;
    std::vector<Word> witness_words;
    std::optional<InvariantSetCertificate> certificate;

    static Verdict yes(std::string note) { return {Status::CertifiedYes, std::move(note), "", {}, {}, {}}; }
    static Verdict no(std::string note) { return {Status::CertifiedNo, std::move(note), "", {}, {}, {}}; }
    static Verdict inconclusive(std::string note) {
        return {Status::Inconclusive, std::move(note), "", {}, {}, {}};
    }
};

/// Commutativity probe. Sampling can refute but never certify: the result is
/// CertifiedNo with a witness (i, j, x) or Inconclusive.
Verdict is_abelian_sampled(const GeneratorSystem& sys, int samples, double tol,
                           std::uint64_t seed = 0);

/// Candidate invariant sets S for no-certificates, seeded from an image
/// enclosure: the sign half-lines, half-lines anchored at the enclosure, and
/// the hull closed under the generators (iterated until stable). Every
/// candidate still has to pass validate_certificate.
std::vector<std::vector<Interval>> invariant_set_candidates(const GeneratorSystem& sys,
                                                            const Interval& seed_image);

} // namespace semirec
