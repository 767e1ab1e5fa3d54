// qpav: committee selection from partial approval votes.
//
// Subcommands: ingest, filter, run, certify, generate, lp-search, curve.
// Exit codes: 0 success, 2 validation error, 3 budget exhaustion.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qpav/engines.hpp"
#include "qpav/experiment.hpp"
#include "qpav/fairness.hpp"
#include "qpav/io.hpp"
#include "qpav/lowerbound.hpp"
#include "qpav/nonadaptive.hpp"
#include "qpav/pav.hpp"

namespace {

using namespace qpav;

void emit(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        atomic_write_file(out_path, j.dump(2) + "\n");
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"committee selection from partial approval votes"};
    app.require_subcommand(1);

    // --- ingest ---------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "convert a vote matrix to a canonical profile");
    std::string ingest_matrix, ingest_out, ingest_impute = "missing_as_disapprove";
    std::uint64_t ingest_seed = 0;
    ingest->add_option("--matrix", ingest_matrix, "wide CSV of votes")->required();
    ingest->add_option("--impute", ingest_impute,
                       "missing_as_disapprove | global_rate_bernoulli");
    ingest->add_option("--seed", ingest_seed, "imputation seed");
    ingest->add_option("--out", ingest_out, "output profile CSV path")->required();
    ingest->callback([&] {
        VoteMatrix matrix = ingest_vote_matrix_file(ingest_matrix);
        FiniteProfile profile = impute(matrix, imputation_from_string(ingest_impute), ingest_seed);
        write_profile_csv(ingest_out, profile, matrix.labels);
        std::cout << "wrote " << ingest_out << " (n=" << profile.voter_count()
                  << ", m=" << profile.candidate_count() << ")\n";
    });

    // --- filter ---------------------------------------------------------
    auto* filter = app.add_subcommand("filter", "drop near-unanimous candidates");
    std::string filter_profile, filter_out;
    double filter_threshold = 0.6;
    filter->add_option("--profile", filter_profile, "canonical profile CSV")->required();
    filter->add_option("--threshold", filter_threshold, "approval fraction cutoff (default 0.6)");
    filter->add_option("--out", filter_out, "output profile CSV path")->required();
    filter->callback([&] {
        FiniteProfile profile = read_profile_csv(filter_profile);
        auto labels = read_profile_labels(filter_profile);
        FilterResult result = filter_popular(profile, filter_threshold);
        std::vector<std::string> kept_labels;
        if (!labels.empty()) {
            for (int orig : result.kept) kept_labels.push_back(labels[orig]);
        }
        write_profile_csv(filter_out, result.profile, kept_labels);
        nlohmann::json mapping;
        mapping["kept"] = result.kept;
        mapping["removed"] = result.removed;
        atomic_write_file(filter_out + ".map.json", mapping.dump(2) + "\n");
        std::cout << "kept " << result.kept.size() << " of "
                  << profile.candidate_count() << " candidates\n";
    });

    // --- run ------------------------------------------------------------
    auto* run = app.add_subcommand("run", "run a selection algorithm or a full experiment");
    std::string run_manifest, run_profile, run_algorithm = "exact-pav", run_out, run_log;
    int run_k = 3, run_t = 20;
    std::string run_alpha = "1";
    double run_delta = 0.05, run_theta = 0.05;
    std::int64_t run_ell = 0, run_budget = 0;
    std::uint64_t run_seed = 1;
    run->add_option("--manifest", run_manifest, "experiment manifest JSON (runs the full pipeline)");
    run->add_option("--profile", run_profile, "canonical profile CSV (single run)");
    run->add_option("--algorithm", run_algorithm,
                    "av | exhaustive-pav | ls-pav | exact-pav | noisy-pav | ucb-pav | greedy-cover");
    run->add_option("--k", run_k, "committee size");
    run->add_option("--t", run_t, "query size");
    run->add_option("--alpha", run_alpha, "approximation parameter (rational or decimal)");
    run->add_option("--delta", run_delta, "failure probability");
    run->add_option("--ell", run_ell, "samples per estimate override");
    run->add_option("--theta", run_theta, "confidence numerator override (ucb)");
    run->add_option("--seed", run_seed, "run seed");
    run->add_option("--budget", run_budget, "voter budget");
    run->add_option("--log", run_log, "write the query log as JSON lines to this path");
    run->add_option("--out", run_out, "output JSON path (default stdout)");
    run->callback([&] {
        if (!run_manifest.empty()) {
            std::ifstream in(run_manifest);
            if (!in) throw ValidationError("cannot open manifest: " + run_manifest);
            RunManifest manifest = RunManifest::from_json(nlohmann::json::parse(in));
            ExperimentReport report = run_experiment(manifest);
            nlohmann::json j;
            j["files"] = report.files_written;
            int failures = 0;
            for (const auto& row : report.rows) {
                if (!row.error.empty()) failures++;
            }
            j["cells"] = report.rows.size();
            j["failures"] = failures;
            emit(j, run_out);
            return;
        }
        if (run_profile.empty()) throw ValidationError("run needs --manifest or --profile");
        FiniteProfile profile = read_profile_csv(run_profile);
        ProfilePopulation population(profile);

        EngineConfig cfg;
        cfg.k = run_k;
        cfg.t = std::min(run_t, profile.candidate_count());
        cfg.alpha = Alpha::parse(run_alpha);
        cfg.delta = run_delta;
        cfg.seed = run_seed;
        if (run_ell > 0) cfg.ell_override = run_ell;
        if (run_budget > 0) cfg.voter_budget = run_budget;

        nlohmann::json j;
        j["config"] = {{"algorithm", run_algorithm}, {"k", run_k},      {"t", cfg.t},
                       {"alpha", run_alpha},         {"delta", run_delta}, {"seed", run_seed},
                       {"ell", run_ell},             {"theta", run_theta}, {"budget", run_budget}};
        const RunResult* logged = nullptr;
        RunResult r;
        if (run_algorithm == "av") {
            Committee c = av_committee(profile, run_k);
            j["committee"] = c.members();
            j["alpha_hat"] = alpha_hat(profile, c);
        } else if (run_algorithm == "exhaustive-pav") {
            Committee c = exhaustive_pav(profile, run_k);
            j["committee"] = c.members();
            j["alpha_hat"] = alpha_hat(profile, c);
        } else if (run_algorithm == "ls-pav") {
            Committee c = ls_pav(profile, run_k, run_seed);
            j["committee"] = c.members();
            j["alpha_hat"] = alpha_hat(profile, c);
        } else if (run_algorithm == "greedy-cover") {
            NonadaptiveResult r = run_nonadaptive_greedy(population, run_k, cfg.t);
            j["committee"] = r.committee.members();
            j["queries_issued"] = r.queries_issued;
            j["alpha_hat"] = alpha_hat(profile, r.committee);
        } else if (run_algorithm == "exact-pav") {
            r = run_exact_pav(population, cfg);
            j.update(r.to_json());
            logged = &r;
        } else if (run_algorithm == "noisy-pav") {
            r = run_noisy_pav(population, cfg);
            j.update(r.to_json());
            logged = &r;
        } else if (run_algorithm == "ucb-pav") {
            if (run_theta > 0) cfg.theta_override = run_theta;
            r = run_ucb_pav(population, cfg);
            j.update(r.to_json());
            logged = &r;
        } else {
            throw ValidationError("unknown algorithm: " + run_algorithm);
        }
        if (!run_log.empty()) {
            if (!logged) throw ValidationError("--log requires a query-based algorithm");
            std::ostringstream lines;
            logged->log.write_jsonl(lines);
            atomic_write_file(run_log, lines.str());
            j["query_log"] = run_log;
        }
        emit(j, run_out);
    });

    // --- certify --------------------------------------------------------
    auto* certify = app.add_subcommand("certify", "alpha-hat and fairness audit of a committee");
    std::string certify_profile, certify_committee, certify_alpha = "1", certify_out;
    certify->add_option("--profile", certify_profile, "canonical profile CSV")->required();
    certify->add_option("--committee", certify_committee, "committee JSON")->required();
    certify->add_option("--alpha", certify_alpha, "approximation parameter");
    certify->add_option("--out", certify_out, "output JSON path (default stdout)");
    certify->callback([&] {
        FiniteProfile profile = read_profile_csv(certify_profile);
        Committee committee = read_committee_json(certify_committee, profile.candidate_count());
        Alpha alpha = Alpha::parse(certify_alpha);
        nlohmann::json j;
        j["alpha_hat"] = alpha_hat(profile, committee);
        j["jr"] = check_jr(profile, committee).to_json();
        j["ejr"] = check_ejr(profile, committee, alpha).to_json();
        j["oas"] = check_oas(profile, committee, alpha).to_json();
        emit(j, certify_out);
    });

    // --- generate -------------------------------------------------------
    auto* generate = app.add_subcommand("generate", "synthetic populations and distributions");
    std::string gen_family = "fig1a", gen_out, gen_dist_path;
    int gen_ell = 3, gen_m = 9, gen_k = 2, gen_k0 = 2, gen_n = 0, gen_special = 0;
    std::uint64_t gen_seed = 1;
    generate->add_option("--family", gen_family, "fig1a | product | adversary");
    generate->add_option("--ell", gen_ell, "hidden-set size (fig1a)");
    generate->add_option("--m", gen_m, "candidate count");
    generate->add_option("--k", gen_k, "committee size parameter");
    generate->add_option("--k0", gen_k0, "party size parameter (adversary)");
    generate->add_option("--n", gen_n, "materialize this many voters (profile output)");
    generate->add_option("--special", gen_special, "special candidate (product)");
    generate->add_option("--dist", gen_dist_path, "distribution JSON (adversary input)");
    generate->add_option("--seed", gen_seed, "generation seed");
    generate->add_option("--out", gen_out, "output path")->required();
    generate->callback([&] {
        if (gen_family == "fig1a") {
            SubsetDistribution dist = fig1a_distribution(gen_ell);
            if (gen_n > 0) {
                write_profile_csv(gen_out, dist.to_population().materialize(gen_n), {});
                std::cout << "wrote profile " << gen_out << "\n";
            } else {
                write_distribution_json(gen_out, dist);
                std::cout << "wrote distribution " << gen_out << "\n";
            }
        } else if (gen_family == "product") {
            ProductPopulation pop = gen_product_population(gen_m, gen_special, gen_k);
            if (gen_n <= 0) throw ValidationError("product generation needs --n voters");
            Rng rng(gen_seed);
            std::vector<CandidateSet> ballots;
            CandidateSet everyone = CandidateSet::full(gen_m);
            for (int i = 0; i < gen_n; ++i) ballots.push_back(pop.sample_ballot(everyone, rng));
            write_profile_csv(gen_out, FiniteProfile(std::move(ballots), gen_m), {});
            std::cout << "wrote profile " << gen_out << " (seed " << gen_seed << ")\n";
        } else if (gen_family == "adversary") {
            SubsetDistribution dist = gen_dist_path.empty()
                                          ? fig1a_distribution(gen_ell)
                                          : read_distribution_json(gen_dist_path);
            AdversaryPopulation pop =
                gen_adversary_population(dist, gen_m, gen_k, gen_k0, gen_seed);
            if (gen_n <= 0) throw ValidationError("adversary generation needs --n voters");
            write_profile_csv(gen_out, pop.mixture().materialize(gen_n), {});
            std::cout << "wrote profile " << gen_out << " (seed " << gen_seed << ")\n";
        } else {
            throw ValidationError("unknown family: " + gen_family);
        }
    });

    // --- lp-search ------------------------------------------------------
    auto* lp = app.add_subcommand("lp-search", "feasibility of the adversary polyhedron");
    lp->set_help_flag("--help", "print help");  // frees -h for the depth parameter
    int lp_h = 1, lp_k0 = 2, lp_ell = 3;
    bool lp_maximize = false;
    std::string lp_out;
    lp->add_option("--h,-h", lp_h, "marginal symmetry depth")->required();
    lp->add_option("--k0", lp_k0, "party size")->required();
    lp->add_option("--ell", lp_ell, "hidden-set size")->required();
    lp->add_flag("--maximize-x10", lp_maximize, "maximize the bare-singleton weight");
    lp->add_option("--out", lp_out, "output JSON path (default stdout)");
    lp->callback([&] {
        PolyhedronSpec spec = build_polyhedron(lp_h, lp_k0, lp_ell);
        LpResult result = solve_feasibility(spec, lp_maximize);
        nlohmann::json j;
        j["feasible"] = result.feasible;
        j["pivots"] = result.pivots;
        if (result.point) {
            nlohmann::json point;
            for (int i = 0; i < result.point->ell; ++i) {
                std::ostringstream w1, w0;
                w1 << result.point->with_special[i];
                w0 << result.point->without_special[i];
                point["with_special"].push_back(w1.str());
                point["without_special"].push_back(w0.str());
            }
            j["point"] = point;
        }
        if (result.objective) {
            std::ostringstream obj;
            obj << *result.objective;
            j["objective"] = obj.str();
            j["objective_value"] = to_double(*result.objective);
        }
        if (result.certificate) {
            nlohmann::json cert = nlohmann::json::array();
            for (const auto& y : result.certificate->row_multipliers) {
                std::ostringstream s;
                s << y;
                cert.push_back(s.str());
            }
            j["certificate"] = cert;
            j["certificate_verified"] = verify_farkas(spec, *result.certificate);
        }
        emit(j, lp_out);
    });

    // --- curve ----------------------------------------------------------
    auto* curve = app.add_subcommand("curve", "approval-fraction curve of a committee");
    std::string curve_profile, curve_committee, curve_out;
    curve->add_option("--profile", curve_profile, "canonical profile CSV")->required();
    curve->add_option("--committee", curve_committee, "committee JSON")->required();
    curve->add_option("--out", curve_out, "output CSV path")->required();
    curve->callback([&] {
        FiniteProfile profile = read_profile_csv(curve_profile);
        Committee committee = read_committee_json(curve_committee, profile.candidate_count());
        auto fractions = approval_fraction_curve(profile, committee);
        std::ostringstream csv;
        csv << "j,fraction\n";
        for (std::size_t j = 0; j < fractions.size(); ++j) {
            csv << (j + 1) << "," << fractions[j] << "\n";
        }
        atomic_write_file(curve_out, csv.str());
        std::cout << "wrote " << curve_out << "\n";
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const qpav::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const qpav::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
