#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qpav/committee.hpp"
#include "qpav/profile.hpp"
#include "qpav/rational.hpp"

#include "json.hpp"

namespace qpav {

/// Raw agree/disagree/missing votes: one row per voter, one column per
/// comment. Cells are +1 (agree), -1 (disagree), 0 (missing).
struct VoteMatrix {
    int voters = 0;
    int comments = 0;
    std::vector<std::int8_t> cells;  // row-major
    std::vector<std::string> labels;

    std::int8_t at(int voter, int comment) const { return cells[voter * comments + comment]; }
};

/// Parses a wide CSV whose header row names the comments and whose cells are
/// 1, -1, 0, or empty. Ragged rows, unknown symbols and all-missing rows are
/// errors.
VoteMatrix ingest_vote_matrix(std::istream& in);
VoteMatrix ingest_vote_matrix_file(const std::string& path);

enum class Imputation { MissingAsDisapprove, GlobalRateBernoulli };

Imputation imputation_from_string(const std::string& name);
std::string imputation_name(Imputation imputation);

/// Fills missing cells: either as disapprovals, or by independent draws at
/// each comment's observed approval rate (deterministic given the seed).
FiniteProfile impute(const VoteMatrix& matrix, Imputation strategy, std::uint64_t seed = 0);

/// Everything needed to reproduce an experiment run byte-for-byte.
struct RunManifest {
    std::string dataset_id;
    std::string dataset_path;  // raw vote-matrix CSV
    double filter_threshold = 0.6;
    Imputation imputation = Imputation::MissingAsDisapprove;
    std::vector<int> committee_sizes{5, 7, 10};
    int t = 20;
    Alpha alpha{1, 1};
    double delta = 0.05;
    std::int64_t ell = 6;
    double theta = 0.05;
    std::vector<std::uint64_t> seeds{1};
    std::string out_dir;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

struct ExperimentRow {
    std::string dataset;
    int k = 0;
    std::string algorithm;
    std::uint64_t seed = 0;
    double alpha_hat = 0.0;
    std::int64_t voters_queried = 0;
    std::string error;  // nonempty when the cell failed
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::vector<std::string> files_written;
};

/// Full pipeline for one dataset: ingest, impute, filter, run AV / the
/// full-information PAV reference / the two sampled engines for each k and
/// seed, and write results and approval-fraction curves as CSV plus a
/// manifest echo. Per-cell failures are recorded and do not abort the run.
ExperimentReport run_experiment(const RunManifest& manifest);

/// Entry j (1-based) is the fraction of voters approving at least j
/// committee members; weakly decreasing in j.
std::vector<double> approval_fraction_curve(const FiniteProfile& profile,
                                            const Committee& committee);

}  // namespace qpav
