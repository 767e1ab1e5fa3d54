#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qpav/committee.hpp"
#include "qpav/population.hpp"
#include "qpav/rational.hpp"
#include "qpav/rng.hpp"

namespace qpav {

/// A candidate-symmetric distribution over subsets of {1..ell}, parameterized
/// by 2*ell values: with_special[j] is the weight of each set containing the
/// distinguished element plus j others; without_special[j] the weight of each
/// size-j set avoiding it.
struct SymmetricPoint {
    int ell = 0;
    std::vector<Rational> with_special;     // x_{1,j}, j = 0..ell-1
    std::vector<Rational> without_special;  // x_{0,j}, j = 0..ell-1

    Rational total_mass() const;
};

/// The feasibility polyhedron P(h, k0, ell) over the 2*ell symmetric
/// variables: total mass 1, equal marginals for every set size up to h, at
/// least 1/k0 mass on the bare distinguished singleton, and nonnegativity.
struct PolyhedronSpec {
    int h = 0;
    int k0 = 1;
    int ell = 1;

    enum class Relation { Equal, GreaterEqual };
    struct Row {
        std::vector<Rational> coeffs;  // over the 2*ell variables
        Rational rhs;
        Relation relation;
    };
    /// Row 0 is normalization, rows 1..h the marginal equalities, the last
    /// row the cohesion inequality. Nonnegativity is implicit.
    std::vector<Row> rows;

    int num_vars() const { return 2 * ell; }
    int num_equalities() const { return 1 + h; }
    int num_nonnegativity() const { return 2 * ell; }
};

/// Variable order: x_{1,0}..x_{1,ell-1} then x_{0,0}..x_{0,ell-1}.
PolyhedronSpec build_polyhedron(int h, int k0, int ell);

/// Infeasibility certificate: multipliers y (one per spec row) such that the
/// combined row sum_i y_i * row_i has nonpositive coefficients on every
/// variable, a nonnegative multiplier on the inequality row, and a strictly
/// positive right-hand side - a contradiction for nonnegative variables.
struct FarkasCertificate {
    std::vector<Rational> row_multipliers;
};

struct LpResult {
    bool feasible = false;
    std::optional<SymmetricPoint> point;
    std::optional<Rational> objective;  // value of x_{1,0} when maximized
    std::optional<FarkasCertificate> certificate;
    std::int64_t pivots = 0;
};

/// Exact rational phase-1 simplex with Bland's rule; optionally follows with
/// a phase-2 maximization of x_{1,0}. Throws BudgetError past max_pivots.
LpResult solve_feasibility(const PolyhedronSpec& spec, bool maximize_x10 = false,
                           std::int64_t max_pivots = 5'000'000);

bool verify_farkas(const PolyhedronSpec& spec, const FarkasCertificate& certificate);

/// Expands a symmetric point into an explicit sparse subset distribution.
/// Only usable for small ell: the support has up to 2^ell sets.
SubsetDistribution point_to_distribution(const SymmetricPoint& point, int special);

struct DistributionVerdict {
    bool marginals_ok = false;   // equal marginals for all |T| <= h
    bool cohesion_ok = false;    // weight of {s*} >= 1/k0
    bool mass_ok = false;        // total mass 1
    double max_marginal_residual = 0.0;  // relative
    double cohesion_residual = 0.0;
    bool ok() const { return marginals_ok && cohesion_ok && mass_ok; }
};

/// Checks the two adversary conditions by direct marginal summation over the
/// sparse support. Residuals are relative; exact zero means exact equality.
DistributionVerdict verify_distribution(const SubsetDistribution& dist, int h, int k0,
                                        double tolerance = 0.0);

/// Same check at the symmetric level (usable at large ell where the support
/// cannot be expanded).
DistributionVerdict verify_symmetric_point(const SymmetricPoint& point, int h, int k0,
                                           double tolerance = 0.0);

/// Averages a subset distribution over all relabelings fixing the
/// distinguished element. When the input satisfies the adversary conditions
/// the result lies in P(h, k0, ell).
SymmetricPoint symmetrize(const SubsetDistribution& dist);

/// A committee choice made against a party-structured population using only
/// symmetric (non-identifying) information plus randomness.
using NonadaptiveStrategy =
    std::function<Committee(const AdversaryPopulation& population, Rng& rng)>;

/// Picks k0 random candidates from each party's hidden support set plus the
/// required remainder candidates; the baseline that any non-covering
/// strategy cannot beat.
NonadaptiveStrategy uninformed_strategy();

struct TrialStats {
    int trials = 0;
    int failures = 0;
    double failure_rate = 0.0;
};

/// Monte Carlo over hidden-set draws: the fraction of trials in which the
/// strategy's committee violates JR on the exact mixture measure.
TrialStats empirical_jr_failure(const SubsetDistribution& dist, int m, int k, int k0,
                                const NonadaptiveStrategy& strategy, int trials,
                                std::uint64_t seed);

}  // namespace qpav
