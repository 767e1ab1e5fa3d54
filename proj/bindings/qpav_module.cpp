#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "qpav/engines.hpp"
#include "qpav/experiment.hpp"
#include "qpav/fairness.hpp"
#include "qpav/lowerbound.hpp"
#include "qpav/nonadaptive.hpp"
#include "qpav/pav.hpp"

namespace py = pybind11;
using namespace qpav;

namespace {

Committee to_committee(const FiniteProfile& profile, const std::vector<int>& members) {
    return Committee(profile.candidate_count(), members);
}

py::dict report_to_dict(const FairnessReport& report) {
    py::dict d;
    d["property"] = axiom_name(report.axiom);
    d["satisfied"] = report.satisfied;
    if (report.witness) {
        py::dict w;
        w["candidates"] = report.witness->candidates;
        w["voters"] = report.witness->voters;
        w["level"] = report.witness->level;
        d["witness"] = w;
    }
    return d;
}

py::dict result_to_dict(const RunResult& result) {
    py::dict d;
    d["committee"] = result.committee.members();
    d["swaps"] = result.swaps;
    d["queries_issued"] = result.queries_issued;
    d["voters_queried"] = result.voters_queried;
    d["final_gamma"] = result.final_gamma;
    d["budget_exhausted"] = result.budget_exhausted;
    d["ell"] = result.ell_used;
    if (result.certificate_alpha_hat) d["alpha_hat"] = *result.certificate_alpha_hat;
    return d;
}

EngineConfig make_config(int k, int t, const std::string& alpha, double delta,
                         std::optional<std::int64_t> ell, std::optional<double> theta,
                         std::optional<std::int64_t> budget, std::uint64_t seed,
                         bool run_to_budget) {
    EngineConfig cfg;
    cfg.k = k;
    cfg.t = t;
    cfg.alpha = Alpha::parse(alpha);
    cfg.delta = delta;
    cfg.ell_override = ell;
    cfg.theta_override = theta;
    cfg.voter_budget = budget;
    cfg.seed = seed;
    cfg.run_to_budget = run_to_budget;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_qpav, m) {
    m.doc() = "committee selection from partial approval votes";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    py::class_<FiniteProfile>(m, "Profile")
        .def(py::init([](const std::vector<std::vector<int>>& approvals, int m) {
                 return make_profile(approvals, m);
             }),
             py::arg("approvals"), py::arg("m"))
        .def_property_readonly("n", &FiniteProfile::voter_count)
        .def_property_readonly("m", &FiniteProfile::candidate_count)
        .def("ballot",
             [](const FiniteProfile& p, int voter) { return p.ballot(voter).to_vector(); })
        .def("approval_count", &FiniteProfile::approval_count);

    m.def(
        "pav_score",
        [](const FiniteProfile& p, const std::vector<int>& w) {
            return pav_score(p, to_committee(p, w));
        },
        py::arg("profile"), py::arg("committee"));
    m.def(
        "delta_add",
        [](const FiniteProfile& p, const std::vector<int>& w, int c) {
            return delta_add(p, to_committee(p, w), c);
        },
        py::arg("profile"), py::arg("committee"), py::arg("candidate"));
    m.def(
        "delta_swap",
        [](const FiniteProfile& p, const std::vector<int>& w, int in, int out) {
            return delta_swap(p, to_committee(p, w), in, out);
        },
        py::arg("profile"), py::arg("committee"), py::arg("swap_in"), py::arg("swap_out"));
    m.def(
        "delta_star",
        [](const FiniteProfile& p, const std::vector<int>& w) {
            DeltaReport r = delta_star(p, to_committee(p, w));
            py::dict d;
            d["value"] = r.value;
            if (r.best_add) d["best_add"] = *r.best_add;
            if (r.best_swap_out) d["best_swap_out"] = *r.best_swap_out;
            return d;
        },
        py::arg("profile"), py::arg("committee"));
    m.def(
        "alpha_hat",
        [](const FiniteProfile& p, const std::vector<int>& w) {
            return alpha_hat(p, to_committee(p, w));
        },
        py::arg("profile"), py::arg("committee"));

    m.def(
        "av_committee",
        [](const FiniteProfile& p, int k) { return av_committee(p, k).members(); },
        py::arg("profile"), py::arg("k"));
    m.def(
        "exhaustive_pav",
        [](const FiniteProfile& p, int k) { return exhaustive_pav(p, k).members(); },
        py::arg("profile"), py::arg("k"));
    m.def(
        "ls_pav",
        [](const FiniteProfile& p, int k, std::uint64_t seed) {
            return ls_pav(p, k, seed).members();
        },
        py::arg("profile"), py::arg("k"), py::arg("seed") = 0);

    m.def(
        "check_jr",
        [](const FiniteProfile& p, const std::vector<int>& w) {
            return report_to_dict(check_jr(p, to_committee(p, w)));
        },
        py::arg("profile"), py::arg("committee"));
    m.def(
        "check_ejr",
        [](const FiniteProfile& p, const std::vector<int>& w, const std::string& alpha) {
            return report_to_dict(check_ejr(p, to_committee(p, w), Alpha::parse(alpha)));
        },
        py::arg("profile"), py::arg("committee"), py::arg("alpha") = "1");
    m.def(
        "check_oas",
        [](const FiniteProfile& p, const std::vector<int>& w, const std::string& alpha) {
            return report_to_dict(check_oas(p, to_committee(p, w), Alpha::parse(alpha)));
        },
        py::arg("profile"), py::arg("committee"), py::arg("alpha") = "1");

    m.def(
        "filter_popular",
        [](const FiniteProfile& p, double threshold) {
            FilterResult r = filter_popular(p, threshold);
            return py::make_tuple(r.profile, r.kept);
        },
        py::arg("profile"), py::arg("threshold"));
    m.def(
        "approval_fraction_curve",
        [](const FiniteProfile& p, const std::vector<int>& w) {
            return approval_fraction_curve(p, to_committee(p, w));
        },
        py::arg("profile"), py::arg("committee"));

    m.def(
        "run_exact_pav",
        [](const FiniteProfile& p, int k, int t, const std::string& alpha,
           std::uint64_t seed) {
            ProfilePopulation pop(p);
            return result_to_dict(run_exact_pav(
                pop, make_config(k, t, alpha, 0.05, std::nullopt, std::nullopt, std::nullopt,
                                 seed, false)));
        },
        py::arg("profile"), py::arg("k"), py::arg("t"), py::arg("alpha") = "1",
        py::arg("seed") = 0);
    m.def(
        "run_noisy_pav",
        [](const FiniteProfile& p, int k, int t, const std::string& alpha, double delta,
           std::optional<std::int64_t> ell, std::optional<std::int64_t> budget,
           std::uint64_t seed) {
            ProfilePopulation pop(p);
            return result_to_dict(run_noisy_pav(
                pop, make_config(k, t, alpha, delta, ell, std::nullopt, budget, seed, false)));
        },
        py::arg("profile"), py::arg("k"), py::arg("t"), py::arg("alpha") = "1",
        py::arg("delta") = 0.05, py::arg("ell") = std::nullopt, py::arg("budget") = std::nullopt,
        py::arg("seed") = 0);
    m.def(
        "run_ucb_pav",
        [](const FiniteProfile& p, int k, int t, const std::string& alpha, double delta,
           std::optional<std::int64_t> ell, std::optional<double> theta,
           std::optional<std::int64_t> budget, std::uint64_t seed) {
            ProfilePopulation pop(p);
            return result_to_dict(run_ucb_pav(
                pop, make_config(k, t, alpha, delta, ell, theta, budget, seed, false)));
        },
        py::arg("profile"), py::arg("k"), py::arg("t"), py::arg("alpha") = "1",
        py::arg("delta") = 0.05, py::arg("ell") = std::nullopt, py::arg("theta") = std::nullopt,
        py::arg("budget") = std::nullopt, py::arg("seed") = 0);

    m.def(
        "greedy_cover",
        [](const FiniteProfile& p, int k, int t) {
            ProfilePopulation pop(p);
            return run_nonadaptive_greedy(pop, k, t).committee.members();
        },
        py::arg("profile"), py::arg("k"), py::arg("t"));

    m.def(
        "fig1a_profile",
        [](int ell, int n) { return fig1a_distribution(ell).to_population().materialize(n); },
        py::arg("ell") = 3, py::arg("n") = 2);

    m.def(
        "lp_search",
        [](int h, int k0, int ell, bool maximize) {
            PolyhedronSpec spec = build_polyhedron(h, k0, ell);
            LpResult result = solve_feasibility(spec, maximize);
            py::dict d;
            d["feasible"] = result.feasible;
            d["pivots"] = result.pivots;
            if (result.objective) d["objective"] = to_double(*result.objective);
            if (result.point) {
                std::vector<double> x1, x0;
                for (const auto& v : result.point->with_special) x1.push_back(to_double(v));
                for (const auto& v : result.point->without_special) x0.push_back(to_double(v));
                d["with_special"] = x1;
                d["without_special"] = x0;
            }
            if (result.certificate) {
                d["certificate_verified"] = verify_farkas(spec, *result.certificate);
            }
            return d;
        },
        py::arg("h"), py::arg("k0"), py::arg("ell"), py::arg("maximize") = false);
}
