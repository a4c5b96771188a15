#pragma once

#include "mmhmc/diagnostics.hpp"
#include "mmhmc/models.hpp"

#include <string>
#include <vector>

namespace mmhmc {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Chain CSV: header "iter,weight,accepted,theta_1..theta_D", one retained
// sample per row, 17 significant digits.
void write_chain_csv(const std::string& path, const WeightedChain& chain);
WeightedChain read_chain_csv(const std::string& path);

// Sidecar metadata (key = value): wall_time, accept_pos, accept_mom.
void write_chain_meta(const std::string& path, const WeightedChain& chain);
void read_chain_meta(const std::string& path, WeightedChain& chain);  // no-op if absent

struct CsvTable {
    std::vector<std::string> columns;
    Matrix values;
};

CsvTable read_csv_table(const std::string& path);

struct BLRDataset {
    Matrix design;  // K x D, leading ones column, covariates standardized
    Vector labels;
    std::vector<std::string> covariate_names;
    int d = 0;  // regression parameters (covariates + intercept)
    int k = 0;  // observations
};

// Standardizes every covariate to zero mean / unit sd and prepends the
// intercept column. label_column is a header name or a 0-based index.
// Non-binary labels and constant covariates are rejected by column name.
BLRDataset ingest_blr_dataset(const CsvTable& table, const std::string& label_column);
BLRDataset ingest_blr_dataset(const std::string& path, const std::string& label_column);

// Two-column CSV (t, y_t) for stochastic volatility data.
void write_sv_csv(const std::string& path, const Vector& y);
Vector read_sv_csv(const std::string& path);

// Minimal glob over the final path component: '*' and '?'.
std::vector<std::string> glob_files(const std::string& pattern);

}  // namespace mmhmc
