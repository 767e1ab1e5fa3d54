#include "qpav/io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace qpav {

namespace {

std::string rational_to_string(const Rational& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) {
        // exact decimal expansion of the literal
        std::ostringstream out;
        out.precision(17);
        out << j.get<double>();
        std::string text = out.str();
        auto epos = text.find_first_of("eE");
        std::string mantissa = epos == std::string::npos ? text : text.substr(0, epos);
        int exponent = epos == std::string::npos ? 0 : std::stoi(text.substr(epos + 1));
        auto dot = mantissa.find('.');
        std::string digits = mantissa;
        int frac_digits = 0;
        if (dot != std::string::npos) {
            digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
            frac_digits = static_cast<int>(mantissa.size() - dot - 1);
        }
        Rational value{boost::multiprecision::mpz_int(digits)};
        int net = exponent - frac_digits;
        for (int i = 0; i < net; ++i) value *= 10;
        for (int i = 0; i < -net; ++i) value /= 10;
        return value;
    }
    throw ValidationError("cannot parse rational value");
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + tmp.string());
        out << contents;
    }
    fs::rename(tmp, target);
}

void write_profile_csv(const std::string& path, const FiniteProfile& profile,
                       const std::vector<std::string>& labels) {
    std::ostringstream csv;
    csv << "voter,candidate,vote\n";
    for (int v = 0; v < profile.voter_count(); ++v) {
        profile.ballot(v).for_each([&](int c) { csv << v << "," << c << ",1\n"; });
    }
    atomic_write_file(path, csv.str());

    nlohmann::json sidecar;
    sidecar["n"] = profile.voter_count();
    sidecar["m"] = profile.candidate_count();
    sidecar["labels"] = labels;
    atomic_write_file(path + ".json", sidecar.dump(2) + "\n");
}

FiniteProfile read_profile_csv(const std::string& path) {
    std::ifstream sidecar_in(path + ".json");
    if (!sidecar_in) throw ValidationError("missing profile sidecar: " + path + ".json");
    nlohmann::json sidecar = nlohmann::json::parse(sidecar_in);
    const int n = sidecar.at("n").get<int>();
    const int m = sidecar.at("m").get<int>();

    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open profile: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("voter,candidate,vote", 0) != 0)
        throw ValidationError("profile csv must start with 'voter,candidate,vote'");

    std::vector<CandidateSet> ballots(n, CandidateSet(m));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string voter, candidate, vote;
        if (!std::getline(ss, voter, ',') || !std::getline(ss, candidate, ',') ||
            !std::getline(ss, vote, ','))
            throw ValidationError("malformed profile row: " + line);
        int v = std::stoi(voter);
        int c = std::stoi(candidate);
        if (v < 0 || v >= n) throw ValidationError("voter index out of range");
        if (vote == "1") {
            ballots[v].add(c);
        } else if (vote != "-1") {
            throw ValidationError("vote must be 1 or -1");
        }
    }
    return FiniteProfile(std::move(ballots), m);
}

std::vector<std::string> read_profile_labels(const std::string& path) {
    std::ifstream sidecar_in(path + ".json");
    if (!sidecar_in) return {};
    nlohmann::json sidecar = nlohmann::json::parse(sidecar_in);
    if (!sidecar.contains("labels")) return {};
    return sidecar["labels"].get<std::vector<std::string>>();
}

nlohmann::json distribution_to_json(const SubsetDistribution& dist) {
    nlohmann::json j;
    j["ell"] = dist.ell;
    j["s_star"] = dist.special;
    auto entries = nlohmann::json::array();
    for (const auto& [set, weight] : dist.entries) {
        entries.push_back({{"set", set}, {"weight", rational_to_string(weight)}});
    }
    j["entries"] = entries;
    return j;
}

SubsetDistribution distribution_from_json(const nlohmann::json& j) {
    SubsetDistribution dist;
    dist.ell = j.at("ell").get<int>();
    dist.special = j.at("s_star").get<int>();
    for (const auto& entry : j.at("entries")) {
        dist.entries.emplace_back(entry.at("set").get<std::vector<int>>(),
                                  rational_from_json(entry.at("weight")));
    }
    dist.validate();
    return dist;
}

void write_distribution_json(const std::string& path, const SubsetDistribution& dist) {
    atomic_write_file(path, distribution_to_json(dist).dump(2) + "\n");
}

SubsetDistribution read_distribution_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open distribution: " + path);
    return distribution_from_json(nlohmann::json::parse(in));
}

void write_committee_json(const std::string& path, const Committee& committee) {
    nlohmann::json j;
    j["k"] = committee.k();
    j["members"] = committee.members();
    atomic_write_file(path, j.dump(2) + "\n");
}

Committee read_committee_json(const std::string& path, int candidate_count) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open committee: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    auto members = j.at("members").get<std::vector<int>>();
    Committee committee(candidate_count, std::move(members));
    if (j.contains("k") && j["k"].get<int>() != committee.k())
        throw ValidationError("committee size does not match member list");
    return committee;
}

}  // namespace qpav
