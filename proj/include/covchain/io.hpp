#pragma once

#include "covchain/chain_core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace covchain {

// Chain file: JSON object with either "matrix" (row-stochastic, square) or
// "weighted_edges" ([u, v, weight] triples read as an undirected weighted
// graph), plus optional "labels". Malformed input raises ValidationError
// with the byte position when available.
MarkovChain read_chain_file(const std::string& path);

void write_chain_file(const std::string& path, const MarkovChain& chain);

// Plain numeric CSV, one row per line; validated as a metric.
FiniteMetric read_metric_csv(const std::string& path);

// 17-significant-digit rows; labels become a leading column when present.
void write_matrix_csv(std::ostream& os, const Matrix& m,
                      const std::vector<std::string>& labels = {});

} // namespace covchain
