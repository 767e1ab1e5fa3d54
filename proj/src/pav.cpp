#include "qpav/pav.hpp"

#include <algorithm>
#include <limits>

#include "qpav/rng.hpp"

namespace qpav {

namespace {

using int128 = __int128;

// Next k-combination of indices in lexicographic order; false when done.
bool next_combination(std::vector<int>& comb, int m) {
    const int k = static_cast<int>(comb.size());
    for (int i = k - 1; i >= 0; --i) {
        if (comb[i] < m - k + i) {
            comb[i]++;
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::int64_t combinations_capped(int m, int k, std::int64_t cap) {
    std::int64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (m - k + i) / i;
        if (c > cap) return cap + 1;
    }
    return c;
}

}  // namespace

CommitteeScorer::CommitteeScorer(const FiniteProfile& profile, Committee committee)
    : profile_(&profile), committee_(std::move(committee)) {
    if (committee_.universe() != profile.candidate_count())
        throw ValidationError("committee universe does not match profile");
    scale_ = denominator_scale(committee_.k() + 1);
    counts_.resize(profile.voter_count());
    for (int v = 0; v < profile.voter_count(); ++v) {
        counts_[v] = profile.ballot(v).intersect_count(committee_.mask());
    }
}

std::int64_t CommitteeScorer::pav_score_scaled() const {
    // H_j * scale is integral for j <= k.
    std::vector<std::int64_t> harm(committee_.k() + 1, 0);
    for (int j = 1; j <= committee_.k(); ++j) harm[j] = harm[j - 1] + scale_ / j;
    std::int64_t total = 0;
    for (auto c : counts_) total += harm[c];
    return total;
}

double CommitteeScorer::pav_score() const {
    return static_cast<double>(pav_score_scaled()) /
           (static_cast<double>(scale_) * profile_->voter_count());
}

std::int64_t CommitteeScorer::delta_add_scaled(int candidate) const {
    if (committee_.contains(candidate)) throw ValidationError("candidate already on committee");
    std::int64_t sum = 0;
    for (int v : profile_->approvers(candidate)) sum += scale_ / (counts_[v] + 1);
    return sum;
}

double CommitteeScorer::delta_add(int candidate) const {
    return static_cast<double>(delta_add_scaled(candidate)) /
           (static_cast<double>(scale_) * profile_->voter_count());
}

std::int64_t CommitteeScorer::delta_swap_scaled(int in, int out) const {
    if (committee_.contains(in) || !committee_.contains(out))
        throw ValidationError("swap membership violation");
    std::int64_t sum = 0;
    for (int v : profile_->approvers(in)) {
        if (!profile_->ballot(v).contains(out)) sum += scale_ / (counts_[v] + 1);
    }
    for (int v : profile_->approvers(out)) {
        if (!profile_->ballot(v).contains(in)) sum -= scale_ / counts_[v];
    }
    return sum;
}

double CommitteeScorer::delta_swap(int in, int out) const {
    return static_cast<double>(delta_swap_scaled(in, out)) /
           (static_cast<double>(scale_) * profile_->voter_count());
}

std::int64_t CommitteeScorer::delta_star_scaled(int* best_add) const {
    std::int64_t best = 0;
    int argmax = -1;
    for (int c = 0; c < profile_->candidate_count(); ++c) {
        if (committee_.contains(c)) continue;
        std::int64_t d = delta_add_scaled(c);
        if (argmax < 0 || d > best) {
            best = d;
            argmax = c;
        }
    }
    if (best_add) *best_add = argmax;
    if (argmax < 0) return 0;  // committee covers every candidate
    return best;
}

DeltaReport CommitteeScorer::delta_star() const {
    int argmax = -1;
    std::int64_t scaled = delta_star_scaled(&argmax);
    DeltaReport report;
    report.value =
        static_cast<double>(scaled) / (static_cast<double>(scale_) * profile_->voter_count());
    if (argmax >= 0) {
        report.best_add = argmax;
        std::int64_t best_swap = std::numeric_limits<std::int64_t>::min();
        int out = -1;
        for (int y : committee_.members()) {
            std::int64_t g = delta_swap_scaled(argmax, y);
            if (g > best_swap) {
                best_swap = g;
                out = y;
            }
        }
        if (out >= 0) report.best_swap_out = out;
    }
    return report;
}

bool CommitteeScorer::certifies(const Alpha& alpha) const {
    // delta_star < 1/(alpha k)  <=>  scaled * alpha_num * k < n * scale * alpha_den
    std::int64_t scaled = delta_star_scaled();
    int128 lhs = static_cast<int128>(scaled) * alpha.num * committee_.k();
    int128 rhs = static_cast<int128>(profile_->voter_count()) * scale_ * alpha.den;
    return lhs < rhs;
}

void CommitteeScorer::apply_swap(int in, int out) {
    if (committee_.contains(in) || !committee_.contains(out))
        throw ValidationError("swap membership violation");
    for (int v : profile_->approvers(in)) counts_[v]++;
    for (int v : profile_->approvers(out)) counts_[v]--;
    committee_ = committee_.with_swap(in, out);
}

double pav_score(const FiniteProfile& profile, const Committee& committee) {
    return CommitteeScorer(profile, committee).pav_score();
}

double delta_add(const FiniteProfile& profile, const Committee& committee, int candidate) {
    return CommitteeScorer(profile, committee).delta_add(candidate);
}

double delta_swap(const FiniteProfile& profile, const Committee& committee, int in, int out) {
    return CommitteeScorer(profile, committee).delta_swap(in, out);
}

DeltaReport delta_star(const FiniteProfile& profile, const Committee& committee) {
    return CommitteeScorer(profile, committee).delta_star();
}

double alpha_hat(const FiniteProfile& profile, const Committee& committee) {
    CommitteeScorer scorer(profile, committee);
    std::int64_t scaled = scorer.delta_star_scaled();
    if (scaled == 0) return std::numeric_limits<double>::infinity();
    double ds = static_cast<double>(scaled) /
                (static_cast<double>(scorer.scale()) * profile.voter_count());
    return 1.0 / (committee.k() * ds);
}

Committee av_committee(const FiniteProfile& profile, int k) {
    const int m = profile.candidate_count();
    if (k > m) throw ValidationError("committee size exceeds candidate count");
    std::vector<int> order(m);
    for (int c = 0; c < m; ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return profile.approval_count(a) > profile.approval_count(b);
    });
    order.resize(k);
    return Committee(m, std::move(order));
}

Committee exhaustive_pav(const FiniteProfile& profile, int k, std::int64_t budget) {
    const int m = profile.candidate_count();
    if (k > m) throw ValidationError("committee size exceeds candidate count");
    if (combinations_capped(m, k, budget) > budget)
        throw BudgetError("exhaustive enumeration exceeds committee budget");

    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    std::vector<int> best;
    std::int64_t best_score = -1;
    do {
        CommitteeScorer scorer(profile, Committee(m, comb));
        std::int64_t score = scorer.pav_score_scaled();
        if (score > best_score) {  // strict: keeps the lexicographically first maximizer
            best_score = score;
            best = comb;
        }
    } while (next_combination(comb, m));
    return Committee(m, best);
}

namespace {

Committee local_search(const FiniteProfile& profile, int k, std::uint64_t seed,
                       bool positive_gain_only) {
    const int m = profile.candidate_count();
    if (k > m) throw ValidationError("committee size exceeds candidate count");
    Rng rng(seed);
    Committee start(m, rng.sample_distinct(m, k));
    CommitteeScorer scorer(profile, start);

    // Swap while some pair improves the score by at least 1/k^2 (or by any
    // positive amount in local-optimum mode); best gain first, lexicographic
    // (in, out) ties. Gains are exact integers, so termination is exact.
    const std::int64_t n = profile.voter_count();
    while (true) {
        std::int64_t best_gain = 0;
        int best_in = -1, best_out = -1;
        for (int c = 0; c < m; ++c) {
            if (scorer.committee().contains(c)) continue;
            for (int y : scorer.committee().members()) {
                std::int64_t gain = scorer.delta_swap_scaled(c, y);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_in = c;
                    best_out = y;
                }
            }
        }
        if (best_in < 0) break;
        if (!positive_gain_only) {
            // require gain >= 1/k^2, i.e. gain * k^2 >= n * scale
            int128 lhs = static_cast<int128>(best_gain) * k * k;
            int128 rhs = static_cast<int128>(n) * scorer.scale();
            if (lhs < rhs) break;
        }
        scorer.apply_swap(best_in, best_out);
    }
    return scorer.committee();
}

}  // namespace

Committee ls_pav(const FiniteProfile& profile, int k, std::uint64_t seed) {
    return local_search(profile, k, seed, false);
}

Committee ls_pav_local_optimum(const FiniteProfile& profile, int k, std::uint64_t seed) {
    return local_search(profile, k, seed, true);
}

}  // namespace qpav
