#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpav/committee.hpp"
#include "qpav/population.hpp"
#include "qpav/profile.hpp"
#include "qpav/rational.hpp"

#include "json.hpp"

namespace qpav {

enum class Axiom { JR, EJR, OAS };

std::string axiom_name(Axiom axiom);

struct FairnessWitness {
    std::vector<int> candidates;  // cohesive set T
    std::vector<int> voters;      // group V
    double level = 0.0;           // cohesion level (ell, or real lambda for OAS)
};

struct FairnessReport {
    Axiom axiom = Axiom::JR;
    Alpha alpha{1, 1};
    bool satisfied = true;
    std::optional<FairnessWitness> witness;

    nlohmann::json to_json() const;
};

struct AuditOptions {
    /// Cap on candidate sets examined per cohesion level.
    std::int64_t max_sets_per_level = 2'000'000;
};

/// Violated iff some candidate outside the committee is approved by at least
/// n/k voters none of whom approve a committee member.
FairnessReport check_jr(const FiniteProfile& profile, const Committee& committee);

/// Brute-force EJR audit at approximation alpha. Enumerates cohesive sets as
/// intersections of ballots (which is exhaustive; see the unit tests against
/// raw enumeration) with all size thresholds compared in exact arithmetic.
FairnessReport check_ejr(const FiniteProfile& profile, const Committee& committee, Alpha alpha,
                         const AuditOptions& options = {});

/// Brute-force OAS audit at approximation alpha. For each candidate
/// intersection set, supporters are scanned in ascending committee-overlap
/// order; prefixes realize the minimum average satisfaction per group size.
FairnessReport check_oas(const FiniteProfile& profile, const Committee& committee, Alpha alpha,
                         const AuditOptions& options = {});

/// Average number of committee members approved per voter of `voters`.
double avs(const FiniteProfile& profile, const Committee& committee, const std::vector<int>& voters);

/// min(|common approvals of voters|, |V|/(n * delta_star) - 1); the second
/// term is +infinity when delta_star is zero. avs() never falls below this.
double avs_lower_bound(const FiniteProfile& profile, const Committee& committee,
                       const std::vector<int>& voters);

/// Re-validates a witness against the raw defining inequalities.
bool witness_valid(const FiniteProfile& profile, const Committee& committee, Axiom axiom,
                   Alpha alpha, const FairnessWitness& witness);

/// JR audit on the exact population measure (mixtures, product populations):
/// violated iff some outside candidate has solo mass >= 1/k.
FairnessReport check_jr(const Population& population, const Committee& committee);

}  // namespace qpav
