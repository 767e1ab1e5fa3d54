#pragma once

#include <string>
#include <vector>

#include "qpav/committee.hpp"
#include "qpav/population.hpp"
#include "qpav/profile.hpp"

#include "json.hpp"

namespace qpav {

/// Writes `contents` to `path` via a temporary file and rename.
void atomic_write_file(const std::string& path, const std::string& contents);

/// Canonical profile file: CSV with header `voter,candidate,vote` and vote in
/// {1,-1}, plus a JSON sidecar `<path>.json` holding {n, m, labels}.
void write_profile_csv(const std::string& path, const FiniteProfile& profile,
                       const std::vector<std::string>& labels = {});
FiniteProfile read_profile_csv(const std::string& path);
std::vector<std::string> read_profile_labels(const std::string& path);

/// Distribution file: JSON {ell, s_star, entries: [{set: [...], weight: "p/q"}]}.
void write_distribution_json(const std::string& path, const SubsetDistribution& dist);
SubsetDistribution read_distribution_json(const std::string& path);
nlohmann::json distribution_to_json(const SubsetDistribution& dist);
SubsetDistribution distribution_from_json(const nlohmann::json& j);

/// Committee file: JSON {k, members: [...]}.
void write_committee_json(const std::string& path, const Committee& committee);
Committee read_committee_json(const std::string& path, int candidate_count);

}  // namespace qpav
