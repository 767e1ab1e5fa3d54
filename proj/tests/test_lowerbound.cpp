#include <algorithm>

#include "doctest.h"

#include "qpav/lowerbound.hpp"

#include "support/reference.hpp"

using namespace qpav;

namespace {

// value * 10^-exp10 as an exact rational
Rational dec(long long digits, int exp10) {
    Rational r(digits);
    for (int i = 0; i < exp10; ++i) r /= 10;
    return r;
}

std::vector<Rational> point_vars(const SymmetricPoint& p) {
    std::vector<Rational> x(p.with_special);
    x.insert(x.end(), p.without_special.begin(), p.without_special.end());
    return x;
}

bool satisfies_all_rows(const PolyhedronSpec& spec, const SymmetricPoint& p) {
    auto x = point_vars(p);
    for (const auto& v : x) {
        if (v < 0) return false;
    }
    for (const auto& row : spec.rows) {
        Rational lhs = 0;
        for (int j = 0; j < spec.num_vars(); ++j) lhs += row.coeffs[j] * x[j];
        if (row.relation == PolyhedronSpec::Relation::Equal && lhs != row.rhs) return false;
        if (row.relation == PolyhedronSpec::Relation::GreaterEqual && lhs < row.rhs) return false;
    }
    return true;
}

SubsetDistribution relabel(const SubsetDistribution& dist, const std::vector<int>& perm) {
    SubsetDistribution out;
    out.ell = dist.ell;
    out.special = perm[dist.special - 1];
    for (const auto& [set, weight] : dist.entries) {
        std::vector<int> mapped;
        for (int e : set) mapped.push_back(perm[e - 1]);
        std::sort(mapped.begin(), mapped.end());
        out.entries.emplace_back(std::move(mapped), weight);
    }
    return out;
}

}  // namespace

TEST_CASE("polyhedron construction") {
    PolyhedronSpec small = build_polyhedron(1, 2, 3);
    CHECK(small.rows.size() == 3);  // normalization + 1 marginal + cohesion
    CHECK(small.num_equalities() == 2);
    CHECK(small.num_nonnegativity() == 6);

    CHECK(build_polyhedron(0, 2, 3).rows.size() == 2);
    CHECK(build_polyhedron(2, 6, 7).rows.size() == 4);
    CHECK_THROWS_AS(build_polyhedron(3, 2, 3), ValidationError);
}

TEST_CASE("feasible polyhedra from the table") {
    LpResult maximized = solve_feasibility(build_polyhedron(1, 2, 3), true);
    REQUIRE(maximized.feasible);
    REQUIRE(maximized.objective.has_value());
    CHECK(*maximized.objective == Rational(1, 2));
    CHECK(maximized.point->with_special[0] == Rational(1, 2));
    CHECK(maximized.point->without_special[2] == Rational(1, 2));

    for (auto [h, k0] : {std::pair{1, 2}, std::pair{2, 6}, std::pair{3, 10}}) {
        PolyhedronSpec spec = build_polyhedron(h, k0, k0 + 1);
        LpResult result = solve_feasibility(spec);
        REQUIRE(result.feasible);
        CHECK(satisfies_all_rows(spec, *result.point));
    }
}

TEST_CASE("infeasible polyhedra carry verifiable certificates") {
    for (auto [h, k0] : {std::pair{1, 1}, std::pair{2, 5}}) {
        PolyhedronSpec spec = build_polyhedron(h, k0, k0 + 1);
        LpResult result = solve_feasibility(spec);
        REQUIRE_FALSE(result.feasible);
        REQUIRE(result.certificate.has_value());
        CHECK(verify_farkas(spec, *result.certificate));
    }
    // a corrupted multiplier no longer verifies
    PolyhedronSpec spec = build_polyhedron(1, 1, 2);
    LpResult result = solve_feasibility(spec);
    FarkasCertificate broken = *result.certificate;
    broken.row_multipliers[0] += 100;
    CHECK_FALSE(verify_farkas(spec, broken));
}

TEST_CASE("expanding the extreme point recovers the fig1a distribution") {
    LpResult result = solve_feasibility(build_polyhedron(1, 2, 3), true);
    SubsetDistribution expanded = point_to_distribution(*result.point, 1);
    SubsetDistribution expected = fig1a_distribution(3);
    CHECK(expanded.weight_of({1}) == expected.weight_of({1}));
    CHECK(expanded.weight_of({2, 3}) == expected.weight_of({2, 3}));
    CHECK(expanded.special == 1);
}

TEST_CASE("distribution verification at increasing symmetry depths") {
    SubsetDistribution fig = fig1a_distribution(3);
    CHECK(verify_distribution(fig, 1, 2).ok());
    DistributionVerdict pairwise = verify_distribution(fig, 2, 2);
    CHECK_FALSE(pairwise.marginals_ok);  // {2,3} carries 1/2, {1,2} nothing
    CHECK(pairwise.cohesion_ok);

    // uniform over all subsets: fully symmetric but no cohesion mass
    SymmetricPoint uniform;
    uniform.ell = 3;
    uniform.with_special.assign(3, Rational(1, 8));
    uniform.without_special.assign(3, Rational(1, 8));
    SubsetDistribution flat = point_to_distribution(uniform, 1);
    CHECK(verify_distribution(flat, 2, 2).marginals_ok);
    CHECK_FALSE(verify_distribution(flat, 2, 2).cohesion_ok);
}

TEST_CASE("rounded large-instance point passes within the printed precision") {
    SymmetricPoint point;
    point.ell = 73;
    point.with_special.assign(73, Rational(0));
    point.without_special.assign(73, Rational(0));
    point.with_special[0] = dec(1398, 5);
    point.without_special[2] = dec(3204, 7);
    point.with_special[5] = dec(1184, 12);
    point.without_special[13] = dec(1012, 18);
    point.with_special[20] = dec(4781, 23);
    point.without_special[31] = dec(7926, 26);
    point.with_special[41] = dec(5799, 26);
    point.without_special[52] = dec(1875, 23);
    point.with_special[59] = dec(2058, 19);
    point.without_special[67] = dec(8968, 14);
    point.with_special[70] = dec(4577, 9);

    DistributionVerdict verdict = verify_symmetric_point(point, 10, 72, 5e-2);
    CHECK(verdict.marginals_ok);
    CHECK(verdict.cohesion_ok);
    CHECK(verdict.mass_ok);
}

TEST_CASE("symmetrization projects valid distributions into the polyhedron") {
    PolyhedronSpec spec = build_polyhedron(2, 6, 7);
    LpResult result = solve_feasibility(spec, true);
    REQUIRE(result.feasible);
    SubsetDistribution expanded = point_to_distribution(*result.point, 4);

    // relabeling that fixes the distinguished element preserves both
    // adversary conditions; averaging back lands inside the polyhedron
    std::vector<int> perm{3, 1, 7, 4, 2, 6, 5};  // fixes element 4
    SubsetDistribution shuffled = relabel(expanded, perm);
    CHECK(shuffled.special == 4);
    SymmetricPoint averaged = symmetrize(shuffled);
    CHECK(satisfies_all_rows(spec, averaged));
    for (int j = 0; j < 7; ++j) {
        CHECK(averaged.with_special[j] == result.point->with_special[j]);
        CHECK(averaged.without_special[j] == result.point->without_special[j]);
    }
}

TEST_CASE("uninformed strategies fail jr at the predicted rate") {
    SubsetDistribution fig = fig1a_distribution(3);
    TrialStats stats = empirical_jr_failure(fig, 9, 2, 2, uninformed_strategy(), 3000, 12);
    CHECK(stats.failure_rate == doctest::Approx(1.0 / 3.0).epsilon(0.12));

    // wider hidden sets: success approaches 2/ell
    SubsetDistribution wide = fig1a_distribution(6);
    TrialStats wide_stats =
        empirical_jr_failure(wide, 12, 2, 2, uninformed_strategy(), 3000, 13);
    CHECK(1.0 - wide_stats.failure_rate == doctest::Approx(2.0 / 6.0).epsilon(0.15));
}

TEST_CASE("pair-informed strategies never fail on the fig1a family") {
    // inspecting pairwise co-approvals identifies the distinguished
    // candidate: it never appears in a jointly approved pair
    NonadaptiveStrategy pair_informed = [](const AdversaryPopulation& pop, Rng&) {
        std::vector<int> members;
        for (int i = 0; i < pop.parties(); ++i) {
            auto support = pop.hidden_support(i);
            int star = support[0];
            for (int c : support) {
                bool paired = false;
                for (int d : support) {
                    if (c == d) continue;
                    CandidateSet q = CandidateSet::of(pop.candidate_count(), {c, d});
                    if (pop.exact_query(q).mass_exact(q) > 0) paired = true;
                }
                if (!paired) star = c;
            }
            members.push_back(star);
            for (int c : support) {
                if (static_cast<int>(members.size()) < (i + 1) * pop.k0() && c != star) {
                    members.push_back(c);
                }
            }
        }
        for (int d : pop.solo_candidates()) members.push_back(d);
        return Committee(pop.candidate_count(), std::move(members));
    };

    TrialStats stats = empirical_jr_failure(fig1a_distribution(3), 9, 2, 2, pair_informed,
                                            200, 14);
    CHECK(stats.failures == 0);
}
