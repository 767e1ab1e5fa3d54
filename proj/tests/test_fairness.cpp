#include "doctest.h"

#include "qpav/fairness.hpp"
#include "qpav/pav.hpp"
#include "qpav/profile.hpp"

#include "support/reference.hpp"

using namespace qpav;

namespace {
Committee committee_of(const FiniteProfile& p, std::vector<int> members) {
    return Committee(p.candidate_count(), std::move(members));
}
}  // namespace

TEST_CASE("jr on the two-block instance") {
    FiniteProfile p = two_block_profile();
    FairnessReport bad = check_jr(p, committee_of(p, {1, 2}));
    CHECK_FALSE(bad.satisfied);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->candidates == std::vector<int>{0});
    CHECK(bad.witness->voters == std::vector<int>{0});

    CHECK(check_jr(p, committee_of(p, {0, 1})).satisfied);

    FiniteProfile empty = make_profile({{}, {}}, 3);
    CHECK(check_jr(empty, committee_of(empty, {0})).satisfied);
}

TEST_CASE("ejr catches an underrepresented camp") {
    FiniteProfile p = make_profile({{0}, {0}, {1}, {1}}, 3);
    FairnessReport bad = check_ejr(p, committee_of(p, {0, 2}), Alpha(1, 1));
    CHECK_FALSE(bad.satisfied);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->candidates == std::vector<int>{1});
    CHECK(bad.witness->voters == std::vector<int>{2, 3});
    CHECK(bad.witness->level == doctest::Approx(1.0));

    CHECK(check_ejr(p, committee_of(p, {0, 1}), Alpha(1, 1)).satisfied);
}

TEST_CASE("pav committees always pass the alpha=1 audits") {
    Rng rng(31);
    for (int i = 0; i < 40; ++i) {
        int m = rng.uniform_int(2, 6);
        int k = rng.uniform_int(1, m);
        int n = rng.uniform_int(1, 8);
        FiniteProfile p = testing::random_profile(rng, n, m);
        Committee w = exhaustive_pav(p, k);
        CHECK(check_ejr(p, w, Alpha(1, 1)).satisfied);
        CHECK(check_oas(p, w, Alpha(1, 1)).satisfied);
    }
}

TEST_CASE("oas on reference instances") {
    FiniteProfile p = two_block_profile();
    CHECK(check_oas(p, committee_of(p, {1, 2}), Alpha(1, 1)).satisfied);
    CHECK(check_oas(p, committee_of(p, {0, 1}), Alpha(1, 1)).satisfied);

    FiniteProfile everyone = make_profile({{0, 1, 2}, {0, 1, 2}}, 3);
    CHECK(check_oas(everyone, committee_of(everyone, {0, 1}), Alpha(1, 1)).satisfied);
}

TEST_CASE("closure audits agree with raw enumeration") {
    Rng rng(32);
    const Alpha alphas[] = {Alpha(1, 1), Alpha(3, 4), Alpha(1, 2)};
    for (int i = 0; i < 300; ++i) {
        int m = rng.uniform_int(2, 5);
        int k = rng.uniform_int(1, m);
        int n = rng.uniform_int(1, 6);
        FiniteProfile p = testing::random_profile(rng, n, m, 0.5);
        Committee w = testing::random_committee(rng, m, k);
        for (const Alpha& alpha : alphas) {
            FairnessReport ejr = check_ejr(p, w, alpha);
            CHECK(ejr.satisfied == testing::ejr_satisfied_raw(p, w, alpha));
            if (!ejr.satisfied) {
                CHECK(witness_valid(p, w, Axiom::EJR, alpha, *ejr.witness));
            }
            FairnessReport oas = check_oas(p, w, alpha);
            CHECK(oas.satisfied == testing::oas_satisfied_raw(p, w, alpha));
            if (!oas.satisfied) {
                CHECK(witness_valid(p, w, Axiom::OAS, alpha, *oas.witness));
            }
        }
    }
}

TEST_CASE("jr agrees with ejr restricted to singletons") {
    Rng rng(33);
    for (int i = 0; i < 100; ++i) {
        int m = rng.uniform_int(2, 6);
        int k = rng.uniform_int(1, m);
        int n = rng.uniform_int(1, 8);
        FiniteProfile p = testing::random_profile(rng, n, m);
        Committee w = testing::random_committee(rng, m, k);
        FairnessReport jr = check_jr(p, w);
        if (!jr.satisfied) {
            CHECK_FALSE(check_ejr(p, w, Alpha(1, 1)).satisfied);
            CHECK(witness_valid(p, w, Axiom::JR, Alpha(1, 1), *jr.witness));
        }
        // a JR-satisfying committee can still fail EJR at higher levels, so
        // only the violated direction transfers
    }
}

TEST_CASE("ejr witnesses transfer to weaker thresholds") {
    // a violation witness for alpha is a witness for any alpha' >= alpha as
    // long as the group stays large enough for the alpha' threshold
    Rng rng(34);
    for (int i = 0; i < 200; ++i) {
        int m = rng.uniform_int(2, 5);
        int k = rng.uniform_int(1, m);
        int n = rng.uniform_int(1, 7);
        FiniteProfile p = testing::random_profile(rng, n, m, 0.5);
        Committee w = testing::random_committee(rng, m, k);
        FairnessReport half = check_ejr(p, w, Alpha(1, 2));
        if (!half.satisfied) {
            const auto& witness = *half.witness;
            const int level = static_cast<int>(witness.level);
            __int128 lhs = static_cast<__int128>(witness.voters.size()) * 1 * k;
            __int128 rhs = static_cast<__int128>(level) * 1 * n;
            if (lhs >= rhs) {
                CHECK(witness_valid(p, w, Axiom::EJR, Alpha(1, 1), witness));
                CHECK_FALSE(check_ejr(p, w, Alpha(1, 1)).satisfied);
            }
        }
    }
}

TEST_CASE("average satisfaction and its lower bound") {
    FiniteProfile p = two_block_profile();
    Committee w = committee_of(p, {0, 1});
    CHECK(avs(p, w, {0, 1}) == doctest::Approx(1.0));
    CHECK(avs(p, w, {1}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(avs(p, w, {}), ValidationError);

    FiniteProfile all = make_profile({{0, 1}}, 2);
    CHECK(avs(all, committee_of(all, {0, 1}), {0}) == doctest::Approx(2.0));

    // min(|common approvals|, |V|/(n delta_star) - 1) = min(2, 1) = 1
    CHECK(avs_lower_bound(p, w, {1}) == doctest::Approx(1.0));

    // empty intersection forces the bound to zero or below
    FiniteProfile mixed = make_profile({{0}, {1}}, 3);
    CHECK(avs_lower_bound(mixed, committee_of(mixed, {2}), {0, 1}) <= 0.0);

    // unimprovable committee: only the intersection term remains
    FiniteProfile solo = make_profile({{0}, {0}}, 2);
    CHECK(avs_lower_bound(solo, committee_of(solo, {0}), {0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("avs never falls below its bound") {
    Rng rng(35);
    for (int i = 0; i < 300; ++i) {
        int m = rng.uniform_int(2, 7);
        int k = rng.uniform_int(1, m);
        int n = rng.uniform_int(1, 9);
        FiniteProfile p = testing::random_profile(rng, n, m);
        Committee w = testing::random_committee(rng, m, k);
        std::vector<int> group;
        for (int v = 0; v < n; ++v) {
            if (rng.bernoulli(0.5)) group.push_back(v);
        }
        if (group.empty()) group.push_back(0);
        CHECK(avs(p, w, group) >= avs_lower_bound(p, w, group) - 1e-9);
    }
}

TEST_CASE("population-level jr audit") {
    SubsetDistribution d = fig1a_distribution(3);
    MixturePopulation pop = d.to_population();
    CHECK_FALSE(check_jr(pop, Committee(3, {1, 2})).satisfied);
    CHECK(check_jr(pop, Committee(3, {0, 1})).satisfied);

    // the mixture audit agrees with the profile audit on a materialization
    FiniteProfile p = pop.materialize(10);
    CHECK(check_jr(p, Committee(3, {1, 2})).satisfied ==
          check_jr(pop, Committee(3, {1, 2})).satisfied);
}

TEST_CASE("audit budget is enforced") {
    Rng rng(36);
    FiniteProfile p = testing::random_profile(rng, 8, 6, 0.6);
    AuditOptions tight;
    tight.max_sets_per_level = 1;
    CHECK_THROWS_AS(check_oas(p, testing::random_committee(rng, 6, 2), Alpha(1, 1), tight),
                    BudgetError);
}

TEST_CASE("fairness report serializes witnesses") {
    FiniteProfile p = two_block_profile();
    auto j = check_jr(p, committee_of(p, {1, 2})).to_json();
    CHECK(j["property"] == "JR");
    CHECK(j["verdict"] == "violated");
    CHECK(j["witness"]["candidates"][0] == 0);
}
