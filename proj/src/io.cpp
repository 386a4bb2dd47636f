#include "covchain/io.hpp"

#include "covchain/errors.hpp"
#include "covchain/report.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace covchain {

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

} // namespace

MarkovChain read_chain_file(const std::string& path) {
    const nlohmann::json doc = load_json(path);
    if (!doc.is_object()) throw ValidationError(path + ": top level must be an object");

    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        if (!doc["labels"].is_array()) throw ValidationError(path + ": labels must be an array");
        for (const auto& l : doc["labels"]) labels.push_back(l.get<std::string>());
    }

    if (doc.contains("matrix")) {
        const auto& rows = doc["matrix"];
        if (!rows.is_array() || rows.empty()) {
            throw ValidationError(path + ": matrix must be a nonempty array of rows");
        }
        const std::size_t n = rows.size();
        Matrix p(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!rows[i].is_array() || rows[i].size() != n) {
                throw ValidationError(path + ": row " + std::to_string(i) + " must have " +
                                      std::to_string(n) + " entries");
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (!rows[i][j].is_number()) {
                    throw ValidationError(path + ": non-numeric entry at (" + std::to_string(i) +
                                          "," + std::to_string(j) + ")");
                }
                p(i, j) = rows[i][j].get<double>();
            }
        }
        try {
            return make_markov_chain(std::move(p), std::move(labels));
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": " + e.what());
        }
    }

    if (doc.contains("weighted_edges")) {
        const auto& edges = doc["weighted_edges"];
        if (!edges.is_array() || edges.empty()) {
            throw ValidationError(path + ": weighted_edges must be a nonempty array");
        }
        std::size_t n = 0;
        for (const auto& e : edges) {
            if (!e.is_array() || e.size() != 3) {
                throw ValidationError(path + ": each weighted edge must be [u, v, weight]");
            }
            n = std::max({n, e[0].get<std::size_t>() + 1, e[1].get<std::size_t>() + 1});
        }
        Matrix weight(n, n, 0.0);
        for (const auto& e : edges) {
            const std::size_t u = e[0].get<std::size_t>();
            const std::size_t v = e[1].get<std::size_t>();
            const double w = e[2].get<double>();
            if (u == v) throw ValidationError(path + ": self-loop at vertex " + std::to_string(u));
            if (!(w > 0.0)) {
                throw ValidationError(path + ": edge weight must be positive, got " +
                                      format_sig17(w));
            }
            weight(u, v) += w;
            weight(v, u) += w;
        }
        Matrix p(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double deg = 0.0;
            for (std::size_t j = 0; j < n; ++j) deg += weight(i, j);
            if (deg <= 0.0) {
                throw ValidationError(path + ": vertex " + std::to_string(i) + " has no edges");
            }
            for (std::size_t j = 0; j < n; ++j) p(i, j) = weight(i, j) / deg;
        }
        try {
            return make_markov_chain(std::move(p), std::move(labels));
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": " + e.what());
        }
    }

    throw ValidationError(path + ": need either \"matrix\" or \"weighted_edges\"");
}

void write_chain_file(const std::string& path, const MarkovChain& chain) {
    nlohmann::json doc;
    auto& rows = doc["matrix"];
    rows = nlohmann::json::array();
    for (std::size_t i = 0; i < chain.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < chain.n; ++j) row.push_back(chain.transition(i, j));
        rows.push_back(std::move(row));
    }
    if (!chain.labels.empty()) doc["labels"] = chain.labels;
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << doc.dump(2) << '\n';
}

FiniteMetric read_metric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": non-numeric cell '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError(path + ": empty metric file");
    const std::size_t n = rows.size();
    Matrix d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw ValidationError(path + ": row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows[i].size()) + " cells, expected " +
                                  std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) d(i, j) = rows[i][j];
    }
    FiniteMetric metric{std::move(d)};
    validate_metric(metric);
    return metric;
}

void write_matrix_csv(std::ostream& os, const Matrix& m, const std::vector<std::string>& labels) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (!labels.empty()) os << labels[i] << ',';
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << format_sig17(m(i, j));
        }
        os << '\n';
    }
}

} // namespace covchain
