#include "qpav/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qpav/engines.hpp"
#include "qpav/io.hpp"
#include "qpav/pav.hpp"

namespace qpav {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        std::size_t a = cell.find_first_not_of(" \t\r");
        std::size_t b = cell.find_last_not_of(" \t\r");
        cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out << std::setprecision(12) << v;
    return out.str();
}

// Replays a fixed voter pool in seeded random order, one voter per draw.
class PermutationSampler {
public:
    PermutationSampler(const FiniteProfile& profile, std::uint64_t seed) : profile_(&profile) {
        order_.resize(profile.voter_count());
        for (int i = 0; i < profile.voter_count(); ++i) order_[i] = i;
        Rng rng(seed);
        rng.shuffle(order_);
    }

    CandidateSet operator()(const CandidateSet& query) {
        if (next_ >= order_.size()) throw BudgetError("voter pool exhausted");
        return profile_->ballot(order_[next_++]) & query;
    }

private:
    const FiniteProfile* profile_;
    std::vector<int> order_;
    std::size_t next_ = 0;
};

}  // namespace

VoteMatrix ingest_vote_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty vote matrix");
    VoteMatrix matrix;
    matrix.labels = split_csv_line(line);
    matrix.comments = static_cast<int>(matrix.labels.size());
    if (matrix.comments == 0) throw ValidationError("vote matrix has no comments");

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != matrix.comments)
            throw ValidationError("ragged vote matrix row");
        bool any = false;
        for (const auto& cell : cells) {
            std::int8_t v;
            if (cell.empty() || cell == "0") {
                v = 0;
            } else if (cell == "1") {
                v = 1;
                any = true;
            } else if (cell == "-1") {
                v = -1;
                any = true;
            } else {
                throw ValidationError("unknown vote symbol: " + cell);
            }
            matrix.cells.push_back(v);
        }
        if (!any) throw ValidationError("vote matrix row with no votes");
        matrix.voters++;
    }
    if (matrix.voters == 0) throw ValidationError("vote matrix has no voters");
    return matrix;
}

VoteMatrix ingest_vote_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open vote matrix: " + path);
    return ingest_vote_matrix(in);
}

Imputation imputation_from_string(const std::string& name) {
    if (name == "missing_as_disapprove") return Imputation::MissingAsDisapprove;
    if (name == "global_rate_bernoulli") return Imputation::GlobalRateBernoulli;
    throw ValidationError("unknown imputation strategy: " + name);
}

std::string imputation_name(Imputation imputation) {
    switch (imputation) {
        case Imputation::MissingAsDisapprove: return "missing_as_disapprove";
        case Imputation::GlobalRateBernoulli: return "global_rate_bernoulli";
    }
    return "?";
}

FiniteProfile impute(const VoteMatrix& matrix, Imputation strategy, std::uint64_t seed) {
    std::vector<double> rate(matrix.comments, 0.0);
    if (strategy == Imputation::GlobalRateBernoulli) {
        for (int c = 0; c < matrix.comments; ++c) {
            int agree = 0, seen = 0;
            for (int v = 0; v < matrix.voters; ++v) {
                if (matrix.at(v, c) != 0) {
                    seen++;
                    if (matrix.at(v, c) == 1) agree++;
                }
            }
            rate[c] = seen == 0 ? 0.0 : static_cast<double>(agree) / seen;
        }
    }
    Rng rng(seed);
    std::vector<CandidateSet> ballots;
    ballots.reserve(matrix.voters);
    for (int v = 0; v < matrix.voters; ++v) {
        CandidateSet ballot(matrix.comments);
        for (int c = 0; c < matrix.comments; ++c) {
            std::int8_t cell = matrix.at(v, c);
            if (cell == 1) {
                ballot.add(c);
            } else if (cell == 0 && strategy == Imputation::GlobalRateBernoulli &&
                       rng.bernoulli(rate[c])) {
                ballot.add(c);
            }
        }
        ballots.push_back(std::move(ballot));
    }
    return FiniteProfile(std::move(ballots), matrix.comments);
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["dataset_id"] = dataset_id;
    j["dataset_path"] = dataset_path;
    j["filter_threshold"] = filter_threshold;
    j["imputation"] = imputation_name(imputation);
    j["committee_sizes"] = committee_sizes;
    j["t"] = t;
    j["alpha"] = std::to_string(alpha.num) + "/" + std::to_string(alpha.den);
    j["delta"] = delta;
    j["ell"] = ell;
    j["theta"] = theta;
    j["seeds"] = seeds;
    j["out_dir"] = out_dir;
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.dataset_id = j.at("dataset_id").get<std::string>();
    m.dataset_path = j.at("dataset_path").get<std::string>();
    if (j.contains("filter_threshold")) m.filter_threshold = j["filter_threshold"].get<double>();
    if (j.contains("imputation"))
        m.imputation = imputation_from_string(j["imputation"].get<std::string>());
    if (j.contains("committee_sizes"))
        m.committee_sizes = j["committee_sizes"].get<std::vector<int>>();
    if (j.contains("t")) m.t = j["t"].get<int>();
    if (j.contains("alpha")) m.alpha = Alpha::parse(j["alpha"].get<std::string>());
    if (j.contains("delta")) m.delta = j["delta"].get<double>();
    if (j.contains("ell")) m.ell = j["ell"].get<std::int64_t>();
    if (j.contains("theta")) m.theta = j["theta"].get<double>();
    if (j.contains("seeds")) m.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("out_dir")) m.out_dir = j["out_dir"].get<std::string>();
    return m;
}

std::vector<double> approval_fraction_curve(const FiniteProfile& profile,
                                            const Committee& committee) {
    const int k = committee.k();
    std::vector<std::int64_t> at_least(k + 1, 0);
    for (const auto& ballot : profile.ballots()) {
        int overlap = ballot.intersect_count(committee.mask());
        for (int j = 1; j <= std::min(overlap, k); ++j) at_least[j]++;
    }
    std::vector<double> curve(k);
    for (int j = 1; j <= k; ++j) {
        curve[j - 1] = static_cast<double>(at_least[j]) / profile.voter_count();
    }
    return curve;
}

ExperimentReport run_experiment(const RunManifest& manifest) {
    namespace fs = std::filesystem;
    if (manifest.out_dir.empty()) throw ValidationError("manifest needs an output directory");
    fs::create_directories(manifest.out_dir);

    VoteMatrix matrix = ingest_vote_matrix_file(manifest.dataset_path);
    FiniteProfile raw = impute(matrix, manifest.imputation, manifest.seeds.empty()
                                                               ? 0
                                                               : manifest.seeds.front());
    FilterResult filtered = filter_popular(raw, manifest.filter_threshold);
    const FiniteProfile& profile = filtered.profile;
    const int n = profile.voter_count();
    const int m = profile.candidate_count();

    ExperimentReport report;
    std::ostringstream results;
    results << "dataset,k,algorithm,seed,alpha_hat,voters_queried\n";

    auto record = [&](const std::string& algorithm, int k, std::uint64_t seed,
                      const Committee& committee, std::int64_t voters) {
        double ahat = alpha_hat(profile, committee);
        report.rows.push_back({manifest.dataset_id, k, algorithm, seed, ahat, voters, ""});
        results << manifest.dataset_id << "," << k << "," << algorithm << "," << seed << ","
                << format_double(ahat) << "," << voters << "\n";

        auto curve = approval_fraction_curve(profile, committee);
        std::ostringstream curve_csv;
        curve_csv << "j,fraction\n";
        for (std::size_t j = 0; j < curve.size(); ++j) {
            curve_csv << (j + 1) << "," << format_double(curve[j]) << "\n";
        }
        std::string curve_path = manifest.out_dir + "/curve_" + manifest.dataset_id + "_k" +
                                 std::to_string(k) + "_" + algorithm + "_seed" +
                                 std::to_string(seed) + ".csv";
        atomic_write_file(curve_path, curve_csv.str());
        report.files_written.push_back(curve_path);
    };

    auto record_failure = [&](const std::string& algorithm, int k, std::uint64_t seed,
                              const std::string& message) {
        report.rows.push_back({manifest.dataset_id, k, algorithm, seed, 0.0, 0, message});
        results << manifest.dataset_id << "," << k << "," << algorithm << "," << seed
                << ",error,0\n";
    };

    ProfilePopulation population(profile);
    for (int k : manifest.committee_sizes) {
        const int t_eff = std::min(manifest.t, m);
        for (std::uint64_t seed : manifest.seeds) {
            try {
                record("av", k, seed, av_committee(profile, k), n);
            } catch (const std::exception& e) {
                record_failure("av", k, seed, e.what());
            }
            try {
                Committee reference = [&] {
                    try {
                        return exhaustive_pav(profile, k, 50'000);
                    } catch (const BudgetError&) {
                        return ls_pav_local_optimum(profile, k, seed);
                    }
                }();
                record("pav-reference", k, seed, reference, n);
            } catch (const std::exception& e) {
                record_failure("pav-reference", k, seed, e.what());
            }

            EngineConfig cfg;
            cfg.k = k;
            cfg.t = t_eff;
            cfg.alpha = manifest.alpha;
            cfg.delta = manifest.delta;
            cfg.ell_override = manifest.ell;
            cfg.seed = seed;
            cfg.voter_budget = n;
            cfg.run_to_budget = true;

            try {
                PermutationSampler perm(profile, seed);
                BallotSampler sampler = [&perm](const CandidateSet& q) { return perm(q); };
                RunResult r = run_noisy_pav(population, cfg, &sampler);
                record("noisy-pav", k, seed, r.committee, r.voters_queried);
            } catch (const std::exception& e) {
                record_failure("noisy-pav", k, seed, e.what());
            }
            try {
                PermutationSampler perm(profile, seed);
                BallotSampler sampler = [&perm](const CandidateSet& q) { return perm(q); };
                EngineConfig ucb_cfg = cfg;
                ucb_cfg.theta_override = manifest.theta;
                RunResult r = run_ucb_pav(population, ucb_cfg, &sampler);
                record("ucb-pav", k, seed, r.committee, r.voters_queried);
            } catch (const std::exception& e) {
                record_failure("ucb-pav", k, seed, e.what());
            }
        }
    }

    std::string results_path = manifest.out_dir + "/results_" + manifest.dataset_id + ".csv";
    atomic_write_file(results_path, results.str());
    report.files_written.push_back(results_path);

    std::string manifest_path = manifest.out_dir + "/manifest_" + manifest.dataset_id + ".json";
    atomic_write_file(manifest_path, manifest.to_json().dump(2) + "\n");
    report.files_written.push_back(manifest_path);

    nlohmann::json mapping;
    mapping["kept"] = filtered.kept;
    mapping["removed"] = filtered.removed;
    std::string mapping_path = manifest.out_dir + "/filter_map_" + manifest.dataset_id + ".json";
    atomic_write_file(mapping_path, mapping.dump(2) + "\n");
    report.files_written.push_back(mapping_path);

    return report;
}

}  // namespace qpav
