#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gidag/model_prior.hpp"
#include "gidag/simulate.hpp"

namespace gidag {

// External formats are 1-based; conversion to the 0-based internal indexing
// happens here and nowhere else.

// CSV with a header row, first column `context` holding integers 1..K
// (context 1 required, rows in any order), then q numeric columns. Warnings
// (for example a context with zero rows) are appended when a sink is given.
MultiEnvDataset ingest(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
MultiEnvDataset ingest(std::istream& in, const std::string& name,
                       std::vector<std::string>* warnings = nullptr);

void write_dataset_csv(const std::filesystem::path& path, const MultiEnvDataset& data);

// Edge list: one "u v" pair per line, 1-based.
Digraph read_edge_list(const std::filesystem::path& path, int q);
void write_edge_list(const std::filesystem::path& path, const Digraph& g);
std::string edge_list_string(const Digraph& g);

nlohmann::json interventions_to_json(const InterventionCollection& iv);
InterventionCollection interventions_from_json(const nlohmann::json& j, int q);

nlohmann::json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const nlohmann::json& j);
void write_truth(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth read_truth(const std::filesystem::path& path);

// Run configuration; unset fields fall back to the protocol defaults
// (a = q, U = I, all Beta hyperparameters 1, S = 3000q, burn-in = 1000q).
struct RunConfig {
    PriorHyper prior;
    std::optional<double> wishart_a;                     // "q" when unset
    std::optional<std::filesystem::path> wishart_u_csv;  // identity when unset
    std::optional<long long> iterations;
    std::optional<long long> burn_in;
    long long thin = 1;
    int chains = 1;
    std::uint64_t seed = 1;

    Hyperparams hyperparams(int q) const;
    long long effective_iterations(int q) const;
    long long effective_burn_in(int q) const;
};

RunConfig config_from_json(const nlohmann::json& j);
RunConfig read_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const RunConfig& cfg);

// Matrices as comma-separated rows with fixed decimal places.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m, int precision = 6);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

// FNV-1a 64-bit content hash, hex encoded; recorded in run manifests.
std::string content_hash_hex(const std::filesystem::path& path);

}  // namespace gidag
