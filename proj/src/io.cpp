#include "gidag/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gidag {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, long long row, std::size_t col) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        while (used < s.size() && (s[used] == ' ' || s[used] == '\r' || s[used] == '\t')) ++used;
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("non-numeric cell at data row " + std::to_string(row) + ", column " +
                        std::to_string(col + 1) + ": '" + s + "'");
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read file: " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    return out;
}

}  // namespace

MultiEnvDataset ingest(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    auto in = open_input(path);
    return ingest(in, path.string(), warnings);
}

MultiEnvDataset ingest(std::istream& in, const std::string& name, std::vector<std::string>* warnings) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(name + ": empty file");
    const auto header = split_csv_line(line);
    if (header.empty() || header.front() != "context") {
        throw DataError(name + ": first column of the header must be 'context'");
    }
    const std::size_t q = header.size() - 1;
    if (q == 0) throw DataError(name + ": no value columns");

    std::vector<std::vector<std::vector<double>>> rows_by_context;
    long long row_no = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row_no;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw DataError(name + ": ragged row " + std::to_string(row_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        }
        const double ctx_raw = parse_double(cells[0], row_no, 0);
        const int ctx = static_cast<int>(ctx_raw);
        if (ctx_raw != ctx || ctx < 1) {
            throw DataError(name + ": context labels must be integers >= 1 (row " +
                            std::to_string(row_no) + ")");
        }
        if (static_cast<std::size_t>(ctx) > rows_by_context.size()) {
            rows_by_context.resize(static_cast<std::size_t>(ctx));
        }
        std::vector<double> row(q);
        for (std::size_t c = 0; c < q; ++c) row[c] = parse_double(cells[c + 1], row_no, c + 1);
        rows_by_context[static_cast<std::size_t>(ctx - 1)].push_back(std::move(row));
    }

    if (rows_by_context.empty() || rows_by_context.front().empty()) {
        throw DataError(name + ": context 1 (the observational block) must be present");
    }

    std::vector<Eigen::MatrixXd> blocks;
    for (std::size_t k = 0; k < rows_by_context.size(); ++k) {
        const auto& rows = rows_by_context[k];
        if (rows.empty() && warnings != nullptr) {
            warnings->push_back("context " + std::to_string(k + 1) + " has no rows (n_k = 0)");
        }
        Eigen::MatrixXd block(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(q));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < q; ++c) {
                block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
            }
        }
        blocks.push_back(std::move(block));
    }
    return MultiEnvDataset(std::move(blocks));
}

void write_dataset_csv(const std::filesystem::path& path, const MultiEnvDataset& data) {
    auto out = open_output(path);
    out << "context";
    for (int j = 1; j <= data.q(); ++j) out << ",x" << j;
    out << '\n';
    out << std::setprecision(17);
    for (int k = 1; k <= data.context_count(); ++k) {
        const auto& block = data.blocks[static_cast<std::size_t>(k - 1)];
        for (Eigen::Index r = 0; r < block.rows(); ++r) {
            out << k;
            for (Eigen::Index c = 0; c < block.cols(); ++c) out << ',' << block(r, c);
            out << '\n';
        }
    }
}

Digraph read_edge_list(const std::filesystem::path& path, int q) {
    auto in = open_input(path);
    Digraph g(q);
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        long long u = 0, v = 0;
        if (!(row >> u)) continue;  // blank line
        if (!(row >> v)) throw DataError(path.string() + ": malformed edge at line " + std::to_string(line_no));
        if (u < 1 || u > q || v < 1 || v > q) {
            throw DataError(path.string() + ": vertex out of range at line " + std::to_string(line_no));
        }
        g.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
    }
    return g;
}

std::string edge_list_string(const Digraph& g) {
    std::ostringstream out;
    for (auto [u, v] : g.edges()) out << (u + 1) << ' ' << (v + 1) << '\n';
    return out.str();
}

void write_edge_list(const std::filesystem::path& path, const Digraph& g) {
    auto out = open_output(path);
    out << edge_list_string(g);
}

nlohmann::json interventions_to_json(const InterventionCollection& iv) {
    nlohmann::json contexts = nlohmann::json::array();
    for (int k = 1; k <= iv.context_count(); ++k) {
        const auto& c = iv.context(k);
        nlohmann::json jc;
        jc["k"] = k;
        nlohmann::json targets = nlohmann::json::array();
        nlohmann::json parents = nlohmann::json::object();
        c.targets.for_each([&](int j) {
            targets.push_back(j + 1);
            nlohmann::json ps = nlohmann::json::array();
            c.induced_parents[static_cast<std::size_t>(j)].for_each([&](int u) { ps.push_back(u + 1); });
            parents[std::to_string(j + 1)] = ps;
        });
        jc["targets"] = targets;
        jc["parents"] = parents;
        contexts.push_back(jc);
    }
    return nlohmann::json{{"K", iv.context_count()}, {"contexts", contexts}};
}

InterventionCollection interventions_from_json(const nlohmann::json& j, int q) {
    if (!j.contains("K") || !j.contains("contexts")) {
        throw DataError("intervention JSON needs fields 'K' and 'contexts'");
    }
    const int K = j.at("K").get<int>();
    if (K < 1) throw DataError("intervention JSON: K must be >= 1");
    InterventionCollection iv(K, q);
    for (const auto& jc : j.at("contexts")) {
        const int k = jc.at("k").get<int>();
        if (k < 1 || k > K) throw DataError("intervention JSON: context index out of range");
        auto& c = iv.context(k);
        for (const auto& jt : jc.at("targets")) {
            const int target = jt.get<int>();
            if (target < 1 || target > q) throw DataError("intervention JSON: target out of range");
            Bitset parents(q);
            const auto key = std::to_string(target);
            if (jc.contains("parents") && jc.at("parents").contains(key)) {
                for (const auto& jp : jc.at("parents").at(key)) {
                    const int u = jp.get<int>();
                    if (u < 1 || u > q) throw DataError("intervention JSON: parent out of range");
                    parents.set(u - 1);
                }
            }
            c.set_target(target - 1, parents);
        }
    }
    try {
        iv.validate();
    } catch (const ValidityError& e) {
        throw DataError(std::string("intervention JSON: ") + e.what());
    }
    return iv;
}

nlohmann::json truth_to_json(const GroundTruth& truth) {
    const int q = truth.dag.vertex_count();
    nlohmann::json edges = nlohmann::json::array();
    for (auto [u, v] : truth.dag.edges()) edges.push_back({u + 1, v + 1});

    nlohmann::json coef = nlohmann::json::array();
    nlohmann::json var = nlohmann::json::array();
    for (int k = 0; k < truth.params.context_count(); ++k) {
        const auto& b = truth.params.coef[static_cast<std::size_t>(k)];
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < q; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < q; ++c) row.push_back(b(r, c));
            rows.push_back(row);
        }
        coef.push_back(rows);
        nlohmann::json dv = nlohmann::json::array();
        for (int r = 0; r < q; ++r) dv.push_back(truth.params.cond_var[static_cast<std::size_t>(k)](r));
        var.push_back(dv);
    }

    return nlohmann::json{{"q", q},
                          {"K", truth.interventions.context_count()},
                          {"dag", edges},
                          {"interventions", interventions_to_json(truth.interventions)},
                          {"coef", coef},
                          {"var", var}};
}

GroundTruth truth_from_json(const nlohmann::json& j) {
    const int q = j.at("q").get<int>();
    const int K = j.at("K").get<int>();
    if (q < 1 || K < 1) throw DataError("truth JSON: bad dimensions");

    GroundTruth truth;
    truth.dag = Dag(q);
    for (const auto& je : j.at("dag")) {
        const int u = je.at(0).get<int>();
        const int v = je.at(1).get<int>();
        if (u < 1 || u > q || v < 1 || v > q) throw DataError("truth JSON: edge out of range");
        truth.dag.add_edge(u - 1, v - 1);
    }
    if (!is_acyclic(truth.dag)) throw DataError("truth JSON: DAG contains a cycle");
    truth.interventions = interventions_from_json(j.at("interventions"), q);
    if (truth.interventions.context_count() != K) throw DataError("truth JSON: K mismatch");

    if (j.contains("coef")) {
        for (const auto& jm : j.at("coef")) {
            Eigen::MatrixXd b(q, q);
            for (int r = 0; r < q; ++r) {
                for (int c = 0; c < q; ++c) b(r, c) = jm.at(r).at(c).get<double>();
            }
            truth.params.coef.push_back(std::move(b));
        }
        for (const auto& jv : j.at("var")) {
            Eigen::VectorXd dv(q);
            for (int r = 0; r < q; ++r) dv(r) = jv.at(r).get<double>();
            truth.params.cond_var.push_back(std::move(dv));
        }
        if (truth.params.context_count() != K) throw DataError("truth JSON: coefficient blocks != K");
    }
    return truth;
}

void write_truth(const std::filesystem::path& path, const GroundTruth& truth) {
    auto out = open_output(path);
    out << truth_to_json(truth).dump(2) << '\n';
}

GroundTruth read_truth(const std::filesystem::path& path) {
    auto in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return truth_from_json(j);
}

Hyperparams RunConfig::hyperparams(int q) const {
    Eigen::MatrixXd u;
    if (wishart_u_csv) {
        u = read_matrix_csv(*wishart_u_csv);
        if (u.rows() != q || u.cols() != q) {
            throw ConfigError("wishart_U matrix does not match the data dimension");
        }
    } else {
        u = Eigen::MatrixXd::Identity(q, q);
    }
    const double a = wishart_a.value_or(static_cast<double>(q));
    try {
        return Hyperparams(a, std::move(u));
    } catch (const HyperparamError& e) {
        throw ConfigError(std::string("invalid Wishart hyperparameters: ") + e.what());
    }
}

long long RunConfig::effective_iterations(int q) const {
    return iterations.value_or(3000LL * q);
}

long long RunConfig::effective_burn_in(int q) const {
    return burn_in.value_or(1000LL * q);
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    if (j.contains("a_phi")) cfg.prior.a_phi = j.at("a_phi").get<double>();
    if (j.contains("b_phi")) cfg.prior.b_phi = j.at("b_phi").get<double>();
    if (j.contains("a_eta")) cfg.prior.a_eta = j.at("a_eta").get<double>();
    if (j.contains("b_eta")) cfg.prior.b_eta = j.at("b_eta").get<double>();
    if (j.contains("a_d")) cfg.prior.a_d = j.at("a_d").get<double>();
    if (j.contains("b_d")) cfg.prior.b_d = j.at("b_d").get<double>();
    try {
        cfg.prior.validate();
    } catch (const HyperparamError& e) {
        throw ConfigError(std::string("invalid prior hyperparameters: ") + e.what());
    }
    if (j.contains("wishart_a")) {
        const auto& v = j.at("wishart_a");
        if (v.is_string()) {
            if (v.get<std::string>() != "q") throw ConfigError("wishart_a must be a number or \"q\"");
        } else {
            cfg.wishart_a = v.get<double>();
        }
    }
    if (j.contains("wishart_U")) {
        const auto& v = j.at("wishart_U");
        if (v.is_string() && v.get<std::string>() == "identity") {
            // default
        } else if (v.is_string()) {
            cfg.wishart_u_csv = std::filesystem::path(v.get<std::string>());
        } else {
            throw ConfigError("wishart_U must be \"identity\" or a CSV path");
        }
    }
    if (j.contains("iters")) cfg.iterations = j.at("iters").get<long long>();
    if (j.contains("burnin")) cfg.burn_in = j.at("burnin").get<long long>();
    if (j.contains("thin")) cfg.thin = j.at("thin").get<long long>();
    if (j.contains("chains")) cfg.chains = j.at("chains").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (cfg.thin < 1) throw ConfigError("thin must be >= 1");
    if (cfg.chains < 1) throw ConfigError("chains must be >= 1");
    return cfg;
}

RunConfig read_config(const std::filesystem::path& path) {
    auto in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["a_phi"] = cfg.prior.a_phi;
    j["b_phi"] = cfg.prior.b_phi;
    j["a_eta"] = cfg.prior.a_eta;
    j["b_eta"] = cfg.prior.b_eta;
    j["a_d"] = cfg.prior.a_d;
    j["b_d"] = cfg.prior.b_d;
    if (cfg.wishart_a) {
        j["wishart_a"] = *cfg.wishart_a;
    } else {
        j["wishart_a"] = "q";
    }
    j["wishart_U"] = cfg.wishart_u_csv ? cfg.wishart_u_csv->string() : "identity";
    if (cfg.iterations) j["iters"] = *cfg.iterations;
    if (cfg.burn_in) j["burnin"] = *cfg.burn_in;
    j["thin"] = cfg.thin;
    j["chains"] = cfg.chains;
    j["seed"] = cfg.seed;
    return j;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m, int precision) {
    auto out = open_output(path);
    out << std::fixed << std::setprecision(precision);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ',';
            out << m(r, c);
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    long long row_no = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row_no;
        const auto cells = split_csv_line(line);
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) row.push_back(parse_double(cells[c], row_no, c));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError(path.string() + ": ragged row " + std::to_string(row_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path.string() + ": empty matrix");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

std::string content_hash_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    std::ostringstream out;
    out << std::hex << std::setfill('0') << std::setw(16) << h;
    return out.str();
}

}  // namespace gidag
