#include "qpav/lowerbound.hpp"

#include <algorithm>
#include <map>

#include "qpav/fairness.hpp"

namespace qpav {

namespace {

using BigInt = boost::multiprecision::mpz_int;

// Pascal-recurrence binomials in big integers.
std::vector<std::vector<BigInt>> binomial_table(int n) {
    std::vector<std::vector<BigInt>> table(n + 1);
    for (int i = 0; i <= n; ++i) {
        table[i].resize(i + 1);
        table[i][0] = 1;
        table[i][i] = 1;
        for (int j = 1; j < i; ++j) table[i][j] = table[i - 1][j - 1] + table[i - 1][j];
    }
    return table;
}

BigInt binom(const std::vector<std::vector<BigInt>>& table, int n, int k) {
    if (k < 0 || k > n || n < 0) return 0;
    return table[n][k];
}

// Dense exact-rational simplex tableau; Bland's rule in both phases.
class SimplexTableau {
public:
    SimplexTableau(const PolyhedronSpec& spec, std::int64_t max_pivots)
        : spec_(&spec), max_pivots_(max_pivots) {
        const int rows = static_cast<int>(spec.rows.size());
        n_struct_ = spec.num_vars();
        n_surplus_ = 0;
        for (const auto& row : spec.rows) {
            if (row.relation == PolyhedronSpec::Relation::GreaterEqual) n_surplus_++;
        }
        n_total_ = n_struct_ + n_surplus_ + rows;  // artificials, one per row
        a_.assign(rows, std::vector<Rational>(n_total_ + 1, Rational(0)));
        flipped_.assign(rows, false);

        int surplus_at = n_struct_;
        for (int r = 0; r < rows; ++r) {
            const auto& row = spec.rows[r];
            for (int j = 0; j < n_struct_; ++j) a_[r][j] = row.coeffs[j];
            if (row.relation == PolyhedronSpec::Relation::GreaterEqual) {
                a_[r][surplus_at++] = -1;
            }
            a_[r][n_total_] = row.rhs;
            if (a_[r][n_total_] < 0) {
                flipped_[r] = true;
                for (auto& v : a_[r]) v = -v;
            }
            a_[r][n_struct_ + n_surplus_ + r] = 1;  // artificial
        }
        basis_.resize(rows);
        for (int r = 0; r < rows; ++r) basis_[r] = n_struct_ + n_surplus_ + r;
    }

    int artificial_column(int row) const { return n_struct_ + n_surplus_ + row; }
    bool is_artificial(int col) const { return col >= n_struct_ + n_surplus_ && col < n_total_; }
    bool row_flipped(int row) const { return flipped_[row]; }
    std::int64_t pivots() const { return pivots_; }

    // Minimizes cost (costs given per column); returns the objective value.
    Rational minimize(const std::vector<Rational>& cost, bool allow_artificial_entering) {
        std::vector<Rational> reduced(n_total_ + 1, Rational(0));
        for (int j = 0; j <= n_total_; ++j) {
            Rational acc = j < n_total_ ? cost[j] : Rational(0);
            for (std::size_t r = 0; r < a_.size(); ++r) acc -= cost[basis_[r]] * a_[r][j];
            reduced[j] = acc;
        }
        while (true) {
            int entering = -1;
            for (int j = 0; j < n_total_; ++j) {
                if (!allow_artificial_entering && is_artificial(j)) continue;
                if (reduced[j] < 0) {
                    entering = j;  // Bland: lowest-index negative reduced cost
                    break;
                }
            }
            if (entering < 0) break;

            int leaving = -1;
            Rational best_ratio;
            for (std::size_t r = 0; r < a_.size(); ++r) {
                if (a_[r][entering] <= 0) continue;
                Rational ratio = a_[r][n_total_] / a_[r][entering];
                if (leaving < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[r] < basis_[leaving])) {
                    leaving = static_cast<int>(r);
                    best_ratio = ratio;
                }
            }
            if (leaving < 0) throw ValidationError("unbounded linear program");
            pivot(leaving, entering, reduced);
        }
        Rational value = 0;
        for (std::size_t r = 0; r < a_.size(); ++r) value += cost[basis_[r]] * a_[r][n_total_];
        return value;
    }

    // Simplex multipliers for the final basis under `cost`.
    std::vector<Rational> multipliers(const std::vector<Rational>& cost) const {
        // y_r = cost[artificial_r] - reduced_cost[artificial_r]; cheaper to
        // recompute directly: y = c_B B^{-1}, read off artificial columns.
        std::vector<Rational> y(a_.size(), Rational(0));
        for (std::size_t r = 0; r < a_.size(); ++r) {
            const int col = artificial_column(static_cast<int>(r));
            Rational acc = 0;
            for (std::size_t i = 0; i < a_.size(); ++i) acc += cost[basis_[i]] * a_[i][col];
            y[r] = acc;
        }
        return y;
    }

    std::vector<Rational> solution() const {
        std::vector<Rational> x(n_total_, Rational(0));
        for (std::size_t r = 0; r < a_.size(); ++r) x[basis_[r]] = a_[r][n_total_];
        return x;
    }

    // Pivot zero-level artificials out of the basis where possible.
    void expel_artificials() {
        std::vector<Rational> dummy(n_total_ + 1, Rational(0));
        for (std::size_t r = 0; r < a_.size(); ++r) {
            if (!is_artificial(basis_[r])) continue;
            for (int j = 0; j < n_struct_ + n_surplus_; ++j) {
                if (a_[r][j] != 0) {
                    pivot(static_cast<int>(r), j, dummy);
                    break;
                }
            }
        }
    }

    int total_columns() const { return n_total_; }

private:
    void pivot(int row, int col, std::vector<Rational>& reduced) {
        if (++pivots_ > max_pivots_) throw BudgetError("simplex pivot cap exceeded");
        Rational inv = a_[row][col];
        for (auto& v : a_[row]) v /= inv;
        for (std::size_t r = 0; r < a_.size(); ++r) {
            if (static_cast<int>(r) == row || a_[r][col] == 0) continue;
            Rational factor = a_[r][col];
            for (int j = 0; j <= n_total_; ++j) a_[r][j] -= factor * a_[row][j];
        }
        if (!reduced.empty() && reduced[col] != 0) {
            Rational factor = reduced[col];
            for (int j = 0; j <= n_total_; ++j) reduced[j] -= factor * a_[row][j];
        }
        basis_[row] = col;
    }

    const PolyhedronSpec* spec_;
    std::int64_t max_pivots_;
    std::int64_t pivots_ = 0;
    int n_struct_ = 0, n_surplus_ = 0, n_total_ = 0;
    std::vector<std::vector<Rational>> a_;
    std::vector<int> basis_;
    std::vector<bool> flipped_;
};

}  // namespace

Rational SymmetricPoint::total_mass() const {
    auto table = binomial_table(ell);
    Rational total = 0;
    for (int j = 0; j < ell; ++j) {
        Rational count(binom(table, ell - 1, j));
        total += count * (with_special[j] + without_special[j]);
    }
    return total;
}

PolyhedronSpec build_polyhedron(int h, int k0, int ell) {
    if (!(0 <= h && h <= k0 && k0 <= ell))
        throw ValidationError("polyhedron requires 0 <= h <= k0 <= ell");
    auto table = binomial_table(ell);
    PolyhedronSpec spec;
    spec.h = h;
    spec.k0 = k0;
    spec.ell = ell;
    const int n = 2 * ell;  // x_{1,j} at j, x_{0,j} at ell + j

    PolyhedronSpec::Row normalization;
    normalization.coeffs.assign(n, Rational(0));
    for (int j = 0; j < ell; ++j) {
        Rational c(binom(table, ell - 1, j));
        normalization.coeffs[j] = c;
        normalization.coeffs[ell + j] = c;
    }
    normalization.rhs = 1;
    normalization.relation = PolyhedronSpec::Relation::Equal;
    spec.rows.push_back(std::move(normalization));

    for (int tprime = 1; tprime <= h; ++tprime) {
        PolyhedronSpec::Row row;
        row.coeffs.assign(n, Rational(0));
        for (int j = tprime; j <= ell - 1; ++j) {
            Rational c(binom(table, ell - 1 - tprime, j - tprime));
            row.coeffs[j] += c;
            row.coeffs[ell + j] += c;
        }
        for (int j = tprime - 1; j <= ell - 1; ++j) {
            row.coeffs[j] -= Rational(binom(table, ell - tprime, j - tprime + 1));
        }
        row.rhs = 0;
        row.relation = PolyhedronSpec::Relation::Equal;
        spec.rows.push_back(std::move(row));
    }

    PolyhedronSpec::Row cohesion;
    cohesion.coeffs.assign(n, Rational(0));
    cohesion.coeffs[0] = 1;  // x_{1,0}
    cohesion.rhs = Rational(1, k0);
    cohesion.relation = PolyhedronSpec::Relation::GreaterEqual;
    spec.rows.push_back(std::move(cohesion));
    return spec;
}

LpResult solve_feasibility(const PolyhedronSpec& spec, bool maximize_x10,
                           std::int64_t max_pivots) {
    SimplexTableau tableau(spec, max_pivots);
    const int n_total = tableau.total_columns();

    std::vector<Rational> phase1_cost(n_total, Rational(0));
    for (int r = 0; r < static_cast<int>(spec.rows.size()); ++r) {
        phase1_cost[tableau.artificial_column(r)] = 1;
    }
    Rational infeasibility = tableau.minimize(phase1_cost, true);

    LpResult result;
    if (infeasibility > 0) {
        result.feasible = false;
        // y^T A <= 0 on real columns with y^T b > 0, in flipped orientation;
        // undo the flips so the multipliers refer to the spec rows.
        auto y = tableau.multipliers(phase1_cost);
        FarkasCertificate certificate;
        certificate.row_multipliers.resize(y.size());
        for (std::size_t r = 0; r < y.size(); ++r) {
            certificate.row_multipliers[r] = tableau.row_flipped(static_cast<int>(r)) ? -y[r] : y[r];
        }
        result.certificate = std::move(certificate);
        result.pivots = tableau.pivots();
        return result;
    }

    result.feasible = true;
    tableau.expel_artificials();

    if (maximize_x10) {
        std::vector<Rational> phase2_cost(n_total, Rational(0));
        phase2_cost[0] = -1;  // maximize x_{1,0}
        tableau.minimize(phase2_cost, false);
    }

    auto x = tableau.solution();
    SymmetricPoint point;
    point.ell = spec.ell;
    point.with_special.assign(x.begin(), x.begin() + spec.ell);
    point.without_special.assign(x.begin() + spec.ell, x.begin() + 2 * spec.ell);
    if (maximize_x10) result.objective = point.with_special[0];
    result.point = std::move(point);
    result.pivots = tableau.pivots();
    return result;
}

bool verify_farkas(const PolyhedronSpec& spec, const FarkasCertificate& certificate) {
    if (certificate.row_multipliers.size() != spec.rows.size()) return false;
    const int n = spec.num_vars();
    std::vector<Rational> combined(n, Rational(0));
    Rational rhs = 0;
    for (std::size_t r = 0; r < spec.rows.size(); ++r) {
        const Rational& y = certificate.row_multipliers[r];
        if (spec.rows[r].relation == PolyhedronSpec::Relation::GreaterEqual && y < 0) return false;
        for (int j = 0; j < n; ++j) combined[j] += y * spec.rows[r].coeffs[j];
        rhs += y * spec.rows[r].rhs;
    }
    // Contradiction row: nonpositive coefficients over nonnegative variables
    // cannot reach a positive right-hand side.
    for (int j = 0; j < n; ++j) {
        if (combined[j] > 0) return false;
    }
    return rhs > 0;
}

SubsetDistribution point_to_distribution(const SymmetricPoint& point, int special) {
    const int ell = point.ell;
    if (special < 1 || special > ell) throw ValidationError("distinguished element out of range");
    auto table = binomial_table(ell);

    BigInt support = 0;
    for (int j = 0; j < ell; ++j) {
        if (point.with_special[j] != 0) support += binom(table, ell - 1, j);
        if (point.without_special[j] != 0) support += binom(table, ell - 1, j);
    }
    if (support > 2'000'000) throw BudgetError("distribution support too large to expand");

    SubsetDistribution dist;
    dist.ell = ell;
    dist.special = special;

    std::vector<int> others;
    for (int e = 1; e <= ell; ++e) {
        if (e != special) others.push_back(e);
    }
    const int n_others = static_cast<int>(others.size());

    auto emit_combinations = [&](int size, bool include_special, const Rational& weight) {
        if (weight == 0) return;
        std::vector<int> comb(size);
        for (int i = 0; i < size; ++i) comb[i] = i;
        bool more = size <= n_others;
        if (size == 0) {
            std::vector<int> set;
            if (include_special) set.push_back(special);
            dist.entries.emplace_back(std::move(set), weight);
            return;
        }
        while (more) {
            std::vector<int> set;
            if (include_special) set.push_back(special);
            for (int i : comb) set.push_back(others[i]);
            std::sort(set.begin(), set.end());
            dist.entries.emplace_back(std::move(set), weight);
            // advance combination
            int i = size - 1;
            while (i >= 0 && comb[i] == n_others - size + i) i--;
            if (i < 0) {
                more = false;
            } else {
                comb[i]++;
                for (int j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
            }
        }
    };

    for (int j = 0; j < ell; ++j) {
        emit_combinations(j, true, point.with_special[j]);
        emit_combinations(j, false, point.without_special[j]);
    }
    dist.validate();
    return dist;
}

namespace {

DistributionVerdict make_verdict(const std::vector<std::pair<Rational, Rational>>& marginal_ranges,
                                 const Rational& special_weight, int k0, const Rational& mass,
                                 double tolerance) {
    DistributionVerdict verdict;
    double worst = 0.0;
    bool equal = true;
    for (const auto& [lo, hi] : marginal_ranges) {
        if (lo != hi) equal = false;
        if (hi > 0) {
            worst = std::max(worst, to_double((hi - lo) / hi));
        } else if (lo != hi) {
            worst = 1.0;
        }
    }
    verdict.max_marginal_residual = worst;
    verdict.marginals_ok = equal || worst <= tolerance;

    Rational need(1, k0);
    if (special_weight >= need) {
        verdict.cohesion_residual = 0.0;
        verdict.cohesion_ok = true;
    } else {
        verdict.cohesion_residual = to_double((need - special_weight) / need);
        verdict.cohesion_ok = verdict.cohesion_residual <= tolerance;
    }

    Rational mass_gap = mass >= 1 ? Rational(mass - 1) : Rational(1 - mass);
    verdict.mass_ok = mass == 1 || to_double(mass_gap) <= tolerance;
    return verdict;
}

}  // namespace

DistributionVerdict verify_distribution(const SubsetDistribution& dist, int h, int k0,
                                        double tolerance) {
    const int ell = dist.ell;
    std::vector<std::pair<Rational, Rational>> ranges;
    for (int size = 1; size <= h; ++size) {
        // enumerate all T of this size
        std::vector<int> comb(size);
        for (int i = 0; i < size; ++i) comb[i] = i;
        bool first = true;
        Rational lo, hi;
        bool more = size <= ell;
        while (more) {
            std::vector<int> t(size);
            for (int i = 0; i < size; ++i) t[i] = comb[i] + 1;
            Rational m = dist.marginal(t);
            if (first || m < lo) lo = m;
            if (first || m > hi) hi = m;
            first = false;
            int i = size - 1;
            while (i >= 0 && comb[i] == ell - size + i) i--;
            if (i < 0) {
                more = false;
            } else {
                comb[i]++;
                for (int j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
            }
        }
        if (!first) ranges.emplace_back(lo, hi);
    }
    Rational special_weight = dist.weight_of({dist.special});
    Rational mass = 0;
    for (const auto& [s, w] : dist.entries) mass += w;
    return make_verdict(ranges, special_weight, k0, mass, tolerance);
}

DistributionVerdict verify_symmetric_point(const SymmetricPoint& point, int h, int k0,
                                           double tolerance) {
    const int ell = point.ell;
    auto table = binomial_table(ell);
    std::vector<std::pair<Rational, Rational>> ranges;
    for (int tprime = 1; tprime <= h; ++tprime) {
        // marginal of a size-t' set avoiding s* vs one containing s*
        Rational without = 0;
        for (int j = tprime; j <= ell - 1; ++j) {
            Rational c(binom(table, ell - 1 - tprime, j - tprime));
            without += c * (point.with_special[j] + point.without_special[j]);
        }
        Rational with = 0;
        for (int j = tprime - 1; j <= ell - 1; ++j) {
            with += Rational(binom(table, ell - tprime, j - tprime + 1)) * point.with_special[j];
        }
        ranges.emplace_back(std::min(without, with), std::max(without, with));
    }
    return make_verdict(ranges, point.with_special[0], k0, point.total_mass(), tolerance);
}

SymmetricPoint symmetrize(const SubsetDistribution& dist) {
    dist.validate();
    const int ell = dist.ell;
    auto table = binomial_table(ell);
    SymmetricPoint point;
    point.ell = ell;
    point.with_special.assign(ell, Rational(0));
    point.without_special.assign(ell, Rational(0));
    for (const auto& [set, weight] : dist.entries) {
        bool has_special = std::find(set.begin(), set.end(), dist.special) != set.end();
        if (has_special) {
            point.with_special[set.size() - 1] += weight;
        } else if (!set.empty()) {
            point.without_special[set.size()] += weight;
        } else {
            point.without_special[0] += weight;
        }
    }
    for (int j = 0; j < ell; ++j) {
        Rational orbit(binom(table, ell - 1, j));
        point.with_special[j] /= orbit;
        point.without_special[j] /= orbit;
    }
    return point;
}

NonadaptiveStrategy uninformed_strategy() {
    return [](const AdversaryPopulation& pop, Rng& rng) {
        std::vector<int> members;
        for (int i = 0; i < pop.parties(); ++i) {
            auto support = pop.hidden_support(i);
            auto picks = rng.sample_distinct(static_cast<int>(support.size()), pop.k0());
            for (int idx : picks) members.push_back(support[idx]);
        }
        for (int d : pop.solo_candidates()) members.push_back(d);
        return Committee(pop.candidate_count(), std::move(members));
    };
}

TrialStats empirical_jr_failure(const SubsetDistribution& dist, int m, int k, int k0,
                                const NonadaptiveStrategy& strategy, int trials,
                                std::uint64_t seed) {
    if (trials < 1) throw ValidationError("need at least one trial");
    Rng base(seed);
    int failures = 0;
    for (int trial = 0; trial < trials; ++trial) {
        Rng trial_rng = base.child(trial);
        auto pop = gen_adversary_population(dist, m, k, k0, trial_rng.next_u64());
        Committee committee = strategy(pop, trial_rng);
        FairnessReport report = check_jr(pop.mixture(), committee);
        if (!report.satisfied) failures++;
    }
    return TrialStats{trials, failures, static_cast<double>(failures) / trials};
}

}  // namespace qpav
