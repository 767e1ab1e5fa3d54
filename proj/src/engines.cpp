#include "qpav/engines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace qpav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_engine_inputs(const Population& pop, const EngineConfig& cfg) {
    const int m = pop.candidate_count();
    if (cfg.k < 1) throw ValidationError("committee size must be positive");
    if (cfg.t <= cfg.k) throw ValidationError("query size must exceed committee size");
    if (m < cfg.t) throw ValidationError("query size exceeds candidate count");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ValidationError("delta must lie in (0,1)");
    if (cfg.run_to_budget && !cfg.voter_budget)
        throw ValidationError("run_to_budget requires a voter budget");
}

// alpha k^2 / ((1 - alpha) k + 1)
double progress_ratio(Alpha alpha, int k) {
    return static_cast<double>(alpha.num) * k * k /
           (static_cast<double>(alpha.den - alpha.num) * k + alpha.den);
}

std::int64_t cover_rounds(int m, int k, int t) {
    return (static_cast<std::int64_t>(m) - k + (t - k) - 1) / (t - k);
}

// The arbitrary initial state: the first k candidates, with the highest
// member and the lowest outside candidate as the initial swap pair.
struct InitialState {
    Committee committee;
    int out;
    int in;
};

InitialState initial_state(int m, int k) {
    return InitialState{Committee::first_k(m, k), k - 1, k};
}

std::optional<double> population_alpha_hat(const Population& pop, const Committee& committee) {
    Rational best = 0;
    for (int c = 0; c < pop.candidate_count(); ++c) {
        if (committee.contains(c)) continue;
        auto d = pop.exact_delta_add(committee, c);
        if (!d) return std::nullopt;
        if (*d > best) best = *d;
    }
    if (best == 0) return kInf;
    return 1.0 / (committee.k() * to_double(best));
}

Rational exact_delta_add_from_response(const ExactResponse& response, const Committee& committee,
                                       int x) {
    Rational sum = 0;
    for (const auto& [pattern, weight] : response.entries) {
        if (pattern.contains(x)) {
            sum += weight / (pattern.intersect_count(committee.mask()) + 1);
        }
    }
    return sum;
}

Rational exact_delta_swap_from_response(const ExactResponse& response, const Committee& committee,
                                        int x, int y) {
    Rational sum = 0;
    for (const auto& [pattern, weight] : response.entries) {
        const bool has_x = pattern.contains(x);
        const bool has_y = pattern.contains(y);
        const int overlap = pattern.intersect_count(committee.mask());
        if (has_x && !has_y) {
            sum += weight / (overlap + 1);
        } else if (!has_x && has_y) {
            sum -= weight / overlap;
        }
    }
    return sum;
}

class ReplacementSampler {
public:
    ReplacementSampler(const Population& pop, std::uint64_t seed) : pop_(&pop), base_(seed) {}

    CandidateSet operator()(const CandidateSet& query) {
        Rng stream = base_.child(counter_++);
        return pop_->sample_ballot(query, stream);
    }

private:
    const Population* pop_;
    Rng base_;
    std::int64_t counter_ = 0;
};

}  // namespace

nlohmann::json RunResult::to_json() const {
    nlohmann::json j;
    j["committee"] = committee.members();
    j["swaps"] = swaps;
    j["queries_issued"] = queries_issued;
    j["voters_queried"] = voters_queried;
    j["final_gamma"] = final_gamma;
    j["budget_exhausted"] = budget_exhausted;
    j["ell"] = ell_used;
    j["voter_cap"] = voter_cap;
    j["seed"] = seed;
    if (certificate_alpha_hat) j["alpha_hat"] = *certificate_alpha_hat;
    auto trace = nlohmann::json::array();
    for (const auto& s : swap_trace) {
        trace.push_back({{"iteration", s.iteration}, {"out", s.out}, {"in", s.in},
                         {"gamma", s.gamma}});
    }
    j["swap_trace"] = trace;
    return j;
}

// ---------------------------------------------------------------------------
// Exact-query engine
// ---------------------------------------------------------------------------

RunResult run_exact_pav(const Population& pop, const EngineConfig& cfg) {
    validate_engine_inputs(pop, cfg);
    const int m = pop.candidate_count();
    const int k = cfg.k;
    const Rational threshold(cfg.alpha.den, static_cast<std::int64_t>(cfg.alpha.num) * k);

    auto [committee, swap_out, swap_in] = initial_state(m, k);

    RunResult result;
    result.seed = cfg.seed;
    bool have_gamma = false;  // gamma starts at +infinity
    Rational gamma = 0;
    std::int64_t iteration = 0;

    while (!have_gamma || gamma >= threshold) {
        ++iteration;
        if (!(iteration == 1 && cfg.skip_initial_swap)) {
            committee = committee.with_swap(swap_in, swap_out);
            result.swaps++;
            result.swap_trace.push_back(
                {iteration, swap_out, swap_in, have_gamma ? to_double(gamma) : kInf});
        }

        auto plan = plan_cover(m, committee, cfg.t);
        result.queries_issued += static_cast<std::int64_t>(plan.size());

        std::map<int, Rational> gains;
        std::vector<int> covering_query(m, -1);
        std::vector<ExactResponse> responses;
        responses.reserve(plan.size());
        for (std::size_t qi = 0; qi < plan.size(); ++qi) {
            responses.push_back(pop.exact_query(plan[qi]));
            plan[qi].for_each([&](int x) {
                if (!committee.contains(x) && covering_query[x] < 0) {
                    covering_query[x] = static_cast<int>(qi);
                    gains.emplace(x, exact_delta_add_from_response(responses[qi], committee, x));
                }
            });
        }

        int best_add = -1;
        const Rational* best_gain = nullptr;
        for (const auto& [x, gain] : gains) {  // ascending x: lowest-index ties
            if (!best_gain || gain > *best_gain) {
                best_gain = &gain;
                best_add = x;
            }
        }
        if (best_add < 0) throw ValidationError("no candidate outside the committee");

        const ExactResponse& response = responses[covering_query[best_add]];
        int best_out = -1;
        Rational best_swap;
        for (int y : committee.members()) {
            Rational g = exact_delta_swap_from_response(response, committee, best_add, y);
            if (best_out < 0 || g > best_swap) {
                best_swap = g;
                best_out = y;
            }
        }

        swap_in = best_add;
        swap_out = best_out;
        gamma = *best_gain;
        have_gamma = true;
    }

    result.committee = committee;
    result.final_gamma = to_double(gamma);
    result.certificate_alpha_hat = population_alpha_hat(pop, committee);
    return result;
}

// ---------------------------------------------------------------------------
// Sampled engine
// ---------------------------------------------------------------------------

std::int64_t noisy_sample_size(Alpha alpha, int k, int m, double delta) {
    if (k < 1 || m < 1 || !(delta > 0.0 && delta < 1.0))
        throw ValidationError("bad parameters for sample size");
    const double r = progress_ratio(alpha, k);
    const double log_term = std::log(8.0 * m * std::pow(static_cast<double>(k), 4) / delta);
    return static_cast<std::int64_t>(std::ceil(288.0 * r * r * log_term));
}

RunResult run_noisy_pav(const Population& pop, const EngineConfig& cfg,
                        const BallotSampler* sampler) {
    validate_engine_inputs(pop, cfg);
    const int m = pop.candidate_count();
    const int k = cfg.k;
    const double ratio = progress_ratio(cfg.alpha, k);
    const double threshold = 1.0 / (cfg.alpha.value() * k) - 1.0 / (12.0 * ratio);
    const std::int64_t ell =
        cfg.ell_override ? *cfg.ell_override : noisy_sample_size(cfg.alpha, k, m, cfg.delta);
    if (ell < 1) throw ValidationError("sample count must be positive");

    ReplacementSampler default_sampler(pop, cfg.seed);
    auto draw = [&](const CandidateSet& q) {
        return sampler ? (*sampler)(q) : default_sampler(q);
    };

    auto [committee, swap_out, swap_in] = initial_state(m, k);

    RunResult result;
    result.seed = cfg.seed;
    result.ell_used = ell;
    double gamma = kInf;
    std::int64_t iteration = 0;
    const std::int64_t round_cost = cover_rounds(m, k, cfg.t) * ell;

    while (cfg.run_to_budget || gamma >= threshold) {
        // Rounds are all-or-nothing: stop (keeping the current committee)
        // rather than start a round the budget cannot complete.
        if (cfg.voter_budget && result.voters_queried + round_cost > *cfg.voter_budget) {
            result.budget_exhausted = true;
            break;
        }
        ++iteration;
        if (!(iteration == 1 && cfg.skip_initial_swap)) {
            committee = committee.with_swap(swap_in, swap_out);
            result.swaps++;
            result.swap_trace.push_back({iteration, swap_out, swap_in, gamma});
        }

        auto plan = plan_cover(m, committee, cfg.t);
        std::vector<std::vector<BallotResponse>> round(plan.size());
        for (std::size_t qi = 0; qi < plan.size(); ++qi) {
            round[qi].reserve(ell);
            for (std::int64_t i = 0; i < ell; ++i) {
                BallotResponse resp{plan[qi], draw(plan[qi])};
                result.log.append(resp.query, resp.approved);
                round[qi].push_back(std::move(resp));
                result.voters_queried++;
                result.queries_issued++;
            }
        }

        std::vector<int> covering_query(m, -1);
        for (std::size_t qi = 0; qi < plan.size(); ++qi) {
            plan[qi].for_each([&](int x) {
                if (!committee.contains(x) && covering_query[x] < 0)
                    covering_query[x] = static_cast<int>(qi);
            });
        }

        int best_add = -1;
        double best_gain = -kInf;
        for (int x = 0; x < m; ++x) {
            if (committee.contains(x)) continue;
            const auto& resps = round[covering_query[x]];
            double sum = 0.0;
            for (const auto& r : resps) sum += ballot_delta_add(r, committee, x);
            double estimate = sum / static_cast<double>(resps.size());
            if (estimate > best_gain) {
                best_gain = estimate;
                best_add = x;
            }
        }

        const auto& resps = round[covering_query[best_add]];
        int best_out = -1;
        double best_swap = -kInf;
        for (int y : committee.members()) {
            double sum = 0.0;
            for (const auto& r : resps) sum += ballot_delta_swap(r, committee, best_add, y);
            double estimate = sum / static_cast<double>(resps.size());
            if (estimate > best_swap) {
                best_swap = estimate;
                best_out = y;
            }
        }

        swap_in = best_add;
        swap_out = best_out;
        gamma = best_gain;
    }

    result.committee = committee;
    result.final_gamma = gamma;
    result.certificate_alpha_hat = population_alpha_hat(pop, committee);
    return result;
}

// ---------------------------------------------------------------------------
// Confidence-bound engine
// ---------------------------------------------------------------------------

UcbConstants ucb_constants(Alpha alpha, int k, int m, int t, double delta) {
    if (t <= k) throw ValidationError("query size must exceed committee size");
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0,1)");
    const double r = progress_ratio(alpha, k);
    // log(4608 k^8 m^(k+2) / delta), evaluated in log space
    const double log_term = std::log(4608.0) + 8.0 * std::log(static_cast<double>(k)) +
                            (k + 2.0) * std::log(static_cast<double>(m)) - std::log(delta);
    const double ell_real = 576.0 * r * r * log_term;
    UcbConstants constants;
    constants.ell = static_cast<std::int64_t>(std::ceil(ell_real));
    const double cap_real = 2.0 * harmonic(k) * static_cast<double>(cover_rounds(m, k, t)) * r *
                            static_cast<double>(constants.ell);
    constants.voter_cap = static_cast<std::int64_t>(std::ceil(cap_real));
    // err numerator: 2 log(4 L (k+1) m^(k+1) / delta)
    constants.err_numerator =
        2.0 * (std::log(4.0) + std::log(static_cast<double>(constants.voter_cap)) +
               std::log(k + 1.0) + (k + 1.0) * std::log(static_cast<double>(m)) -
               std::log(delta));
    return constants;
}

UcbState::UcbState(int m, const Committee& committee, double err_numerator)
    : m_(m), k_(committee.k()), committee_(committee), err_numerator_(err_numerator) {
    add_count_.assign(static_cast<std::size_t>(m_) * (k_ + 1), 0);
    add_sum_.assign(static_cast<std::size_t>(m_) * (k_ + 1), 0.0);
    swap_count_.assign(static_cast<std::size_t>(m_) * k_ * (k_ + 1), 0);
    swap_sum_.assign(static_cast<std::size_t>(m_) * k_ * (k_ + 1), 0.0);
    full_cover_.assign(m_, 0);
}

int UcbState::index_of_member(int y) const {
    const auto& members = committee_.members();
    auto it = std::lower_bound(members.begin(), members.end(), y);
    if (it == members.end() || *it != y) throw ValidationError("not a committee member");
    return static_cast<int>(it - members.begin());
}

void UcbState::rebuild(const QueryLog& log, const Committee& committee) {
    committee_ = committee;
    k_ = committee.k();
    std::fill(add_count_.begin(), add_count_.end(), 0);
    std::fill(add_sum_.begin(), add_sum_.end(), 0.0);
    std::fill(swap_count_.begin(), swap_count_.end(), 0);
    std::fill(swap_sum_.begin(), swap_sum_.end(), 0.0);
    std::fill(full_cover_.begin(), full_cover_.end(), 0);
    for (const auto& entry : log) observe(entry);
}

void UcbState::observe(const QueryLogEntry& entry) {
    const CandidateSet& w = committee_.mask();
    const int coverage = entry.query.intersect_count(w);   // |Q ∩ W|
    const int missing = k_ - coverage;                     // |W \ Q|
    const int overlap = entry.approved.intersect_count(w); // |R ∩ W|

    if (coverage == k_) {
        entry.query.for_each([&](int x) {
            if (!committee_.contains(x)) full_cover_[x]++;
        });
    }

    entry.query.for_each([&](int x) {
        if (committee_.contains(x)) return;
        const std::size_t base = static_cast<std::size_t>(x) * (k_ + 1) + coverage;
        add_count_[base]++;
        if (entry.approved.contains(x)) add_sum_[base] += 1.0 / (overlap + 1);

        const bool has_x = entry.approved.contains(x);
        for (int j = 0; j < k_; ++j) {
            const int y = committee_.members()[j];
            if (!entry.query.contains(y)) continue;
            const std::size_t sbase =
                (static_cast<std::size_t>(x) * k_ + j) * (k_ + 1) + coverage;
            swap_count_[sbase]++;
            const bool has_y = entry.approved.contains(y);
            if (has_x && !has_y) {
                swap_sum_[sbase] += 1.0 / (overlap + missing + 1);
            } else if (!has_x && has_y) {
                swap_sum_[sbase] -= 1.0 / overlap;  // overlap >= 1: y is approved and in W
            }
        }
    });
}

double UcbState::upper_add(int x) const {
    const std::size_t base = static_cast<std::size_t>(x) * (k_ + 1);
    double best = kInf;
    std::int64_t count = 0;
    double sum = 0.0;
    for (int s = k_; s >= 0; --s) {  // stratum s aggregates coverage >= s
        count += add_count_[base + s];
        sum += add_sum_[base + s];
        if (count == 0) continue;
        double bound = sum / count + std::sqrt(err_numerator_ / count);
        best = std::min(best, bound);
    }
    return best;
}

double UcbState::lower_swap(int x, int y) const {
    const std::size_t base = (static_cast<std::size_t>(x) * k_ + index_of_member(y)) * (k_ + 1);
    double best = -kInf;
    std::int64_t count = 0;
    double sum = 0.0;
    for (int s = k_; s >= 1; --s) {
        count += swap_count_[base + s];
        sum += swap_sum_[base + s];
        if (count == 0) continue;
        double bound = sum / count - std::sqrt(err_numerator_ / count);
        best = std::max(best, bound);
    }
    return best;
}

std::int64_t UcbState::stratum_count_add(int x, int s) const {
    const std::size_t base = static_cast<std::size_t>(x) * (k_ + 1);
    std::int64_t count = 0;
    for (int c = s; c <= k_; ++c) count += add_count_[base + c];
    return count;
}

std::int64_t UcbState::stratum_count_swap(int x, int y, int s) const {
    const std::size_t base = (static_cast<std::size_t>(x) * k_ + index_of_member(y)) * (k_ + 1);
    std::int64_t count = 0;
    for (int c = s; c <= k_; ++c) count += swap_count_[base + c];
    return count;
}

std::int64_t UcbState::full_cover_count(int x) const { return full_cover_[x]; }

double ucb_upper(const UcbState& state, int x) { return state.upper_add(x); }
double ucb_lower_swap(const UcbState& state, int x, int y) { return state.lower_swap(x, y); }

RunResult run_ucb_pav(const Population& pop, const EngineConfig& cfg,
                      const BallotSampler* sampler) {
    validate_engine_inputs(pop, cfg);
    const int m = pop.candidate_count();
    const int k = cfg.k;
    const double add_threshold = 1.0 / (cfg.alpha.value() * k);
    const double ratio = progress_ratio(cfg.alpha, k);
    const double swap_threshold = 0.5 / ratio;  // (1/2) ((1-alpha)k + 1) / (alpha k^2)

    UcbConstants constants = ucb_constants(cfg.alpha, k, m, cfg.t, cfg.delta);
    const std::int64_t ell = cfg.ell_override ? *cfg.ell_override : constants.ell;
    const double err_numerator =
        cfg.theta_override ? *cfg.theta_override : constants.err_numerator;
    const std::int64_t budget = cfg.voter_budget ? *cfg.voter_budget : constants.voter_cap;

    ReplacementSampler default_sampler(pop, cfg.seed);
    auto draw = [&](const CandidateSet& q) {
        return sampler ? (*sampler)(q) : default_sampler(q);
    };

    Committee committee = Committee::first_k(m, k);
    UcbState state(m, committee, err_numerator);

    RunResult result;
    result.seed = cfg.seed;
    result.ell_used = ell;
    result.voter_cap = static_cast<double>(constants.voter_cap);
    double gamma = kInf;
    std::int64_t iteration = 0;
    std::int64_t swaps_since_query = 0;
    // Estimates only change when new data arrives, so more consecutive swaps
    // than committees can improve means the stale bounds are cycling; force a
    // query in that case.
    const std::int64_t swap_streak_cap = 2LL * m * k + 4;

    while (true) {
        ++iteration;
        if (cfg.exact_replay) state.rebuild(result.log, committee);

        int best_add = -1;
        double best_upper = -kInf;
        for (int x = 0; x < m; ++x) {
            if (committee.contains(x)) continue;
            double u = state.upper_add(x);
            if (u > best_upper) {
                best_upper = u;
                best_add = x;
            }
        }
        gamma = best_upper;

        if (!cfg.run_to_budget && best_upper < add_threshold) break;

        int best_out = -1;
        double best_lower = -kInf;
        for (int y : committee.members()) {
            double l = state.lower_swap(best_add, y);
            if (l > best_lower) {
                best_lower = l;
                best_out = y;
            }
        }

        if (best_lower >= swap_threshold && swaps_since_query < swap_streak_cap) {
            committee = committee.with_swap(best_add, best_out);
            result.swaps++;
            result.swap_trace.push_back({iteration, best_out, best_add, gamma});
            state.rebuild(result.log, committee);
            swaps_since_query++;
            continue;
        }

        if (result.voters_queried >= budget) {
            result.budget_exhausted = true;
            break;
        }
        swaps_since_query = 0;

        // Query the committee plus the t-k most promising candidates not yet
        // asked together with it ell times; pad with the least-queried rest.
        std::vector<std::pair<double, int>> fresh;
        std::vector<int> saturated;
        for (int x = 0; x < m; ++x) {
            if (committee.contains(x)) continue;
            if (state.full_cover_count(x) < ell) {
                fresh.emplace_back(state.upper_add(x), x);
            } else {
                saturated.push_back(x);
            }
        }
        std::sort(fresh.begin(), fresh.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        CandidateSet query = committee.mask();
        int picked = 0;
        for (const auto& [value, x] : fresh) {
            if (picked == cfg.t - k) break;
            query.add(x);
            picked++;
        }
        if (picked < cfg.t - k) {
            std::sort(saturated.begin(), saturated.end(), [&](int a, int b) {
                auto ca = state.full_cover_count(a), cb = state.full_cover_count(b);
                if (ca != cb) return ca < cb;
                return a < b;
            });
            for (int x : saturated) {
                if (picked == cfg.t - k) break;
                query.add(x);
                picked++;
            }
        }

        CandidateSet approved = draw(query);
        result.log.append(query, approved);
        state.observe(result.log[result.log.size() - 1]);
        result.voters_queried++;
        result.queries_issued++;
    }

    result.committee = committee;
    result.final_gamma = gamma;
    result.certificate_alpha_hat = population_alpha_hat(pop, committee);
    return result;
}

}  // namespace qpav
