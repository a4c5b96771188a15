#include "mmhmc/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace mmhmc {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

void write_chain_csv(const std::string& path, const WeightedChain& chain) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "iter,weight,accepted";
    for (int d = 1; d <= chain.dim(); ++d) os << ",theta_" << d;
    os << "\n";
    char buf[64];
    for (long i = 0; i < chain.n(); ++i) {
        const long iter = i < static_cast<long>(chain.iters.size()) ? chain.iters[i] : i + 1;
        const int acc = i < static_cast<long>(chain.accepted.size()) ? chain.accepted[i] : 1;
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%d", iter, std::exp(chain.log_weights[i]), acc);
        os << buf;
        for (int d = 0; d < chain.dim(); ++d) {
            std::snprintf(buf, sizeof buf, ",%.17g", chain.samples(i, d));
            os << buf;
        }
        os << "\n";
    }
}

WeightedChain read_chain_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty chain file: " + path);
    const auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "iter" || header[1] != "weight" ||
        header[2] != "accepted")
        throw IoError("unexpected chain header in " + path);
    const int dim = static_cast<int>(header.size()) - 3;

    std::vector<std::array<double, 2>> meta;  // weight, accepted
    std::vector<long> iters;
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (static_cast<int>(f.size()) != dim + 3)
            throw IoError("ragged row in chain file " + path);
        iters.push_back(std::stol(f[0]));
        meta.push_back({std::stod(f[1]), std::stod(f[2])});
        for (int d = 0; d < dim; ++d) values.push_back(std::stod(f[3 + d]));
    }
    const long n = static_cast<long>(meta.size());
    WeightedChain chain;
    chain.samples.resize(n, dim);
    chain.log_weights.resize(n);
    chain.iters = std::move(iters);
    for (long i = 0; i < n; ++i) {
        chain.log_weights[i] = std::log(meta[i][0]);
        chain.accepted.push_back(meta[i][1] != 0.0 ? 1 : 0);
        for (int d = 0; d < dim; ++d) chain.samples(i, d) = values[i * dim + d];
    }
    read_chain_meta(path + ".meta", chain);
    return chain;
}

void write_chain_meta(const std::string& path, const WeightedChain& chain) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    char buf[256];
    std::snprintf(buf, sizeof buf, "wall_time = %.17g\naccept_pos = %.17g\naccept_mom = %.17g\n",
                  chain.wall_time, chain.accept_pos, chain.accept_mom);
    os << buf;
}

void read_chain_meta(const std::string& path, WeightedChain& chain) {
    std::ifstream is(path);
    if (!is) return;
    std::string line;
    while (std::getline(is, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const double val = std::stod(trim(line.substr(eq + 1)));
        if (key == "wall_time") chain.wall_time = val;
        else if (key == "accept_pos") chain.accept_pos = val;
        else if (key == "accept_mom") chain.accept_mom = val;
    }
}

CsvTable read_csv_table(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty csv: " + path);
    CsvTable t;
    for (auto& c : split_csv_line(line)) t.columns.push_back(trim(c));
    std::vector<double> vals;
    long rows = 0;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != t.columns.size()) throw IoError("ragged csv row in " + path);
        for (const auto& s : f) vals.push_back(std::stod(trim(s)));
        ++rows;
    }
    t.values.resize(rows, static_cast<Eigen::Index>(t.columns.size()));
    for (long i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < t.columns.size(); ++j)
            t.values(i, static_cast<Eigen::Index>(j)) = vals[i * t.columns.size() + j];
    return t;
}

BLRDataset ingest_blr_dataset(const CsvTable& table, const std::string& label_column) {
    const int ncol = static_cast<int>(table.columns.size());
    int label_idx = -1;
    for (int j = 0; j < ncol; ++j)
        if (table.columns[j] == label_column) label_idx = j;
    if (label_idx < 0) {
        try {
            label_idx = std::stoi(label_column);
        } catch (...) {
            throw IoError("label column not found: " + label_column);
        }
        if (label_idx < 0 || label_idx >= ncol)
            throw IoError("label column index out of range: " + label_column);
    }

    const long k = table.values.rows();
    if (k < 2) throw IoError("blr dataset needs at least 2 rows");
    BLRDataset ds;
    ds.k = static_cast<int>(k);
    ds.d = ncol;  // covariates + intercept
    ds.labels = table.values.col(label_idx);
    for (long i = 0; i < k; ++i)
        if (ds.labels[i] != 0.0 && ds.labels[i] != 1.0)
            throw IoError("non-binary label in column '" + table.columns[label_idx] + "'");

    ds.design.resize(k, ds.d);
    ds.design.col(0).setOnes();
    int col = 1;
    for (int j = 0; j < ncol; ++j) {
        if (j == label_idx) continue;
        Vector c = table.values.col(j);
        const double m = c.mean();
        const double sd = std::sqrt((c.array() - m).square().sum() / static_cast<double>(k - 1));
        if (!(sd > 0.0))
            throw IoError("constant covariate (zero sd): column '" + table.columns[j] + "'");
        ds.design.col(col) = (c.array() - m) / sd;
        ds.covariate_names.push_back(table.columns[j]);
        ++col;
    }
    return ds;
}

BLRDataset ingest_blr_dataset(const std::string& path, const std::string& label_column) {
    return ingest_blr_dataset(read_csv_table(path), label_column);
}

void write_sv_csv(const std::string& path, const Vector& y) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "t,y\n";
    char buf[64];
    for (Eigen::Index t = 0; t < y.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g\n", static_cast<long>(t + 1), y[t]);
        os << buf;
    }
}

Vector read_sv_csv(const std::string& path) {
    const CsvTable t = read_csv_table(path);
    if (t.columns.size() != 2) throw IoError("sv csv must have columns (t, y): " + path);
    return t.values.col(1);
}

namespace {

bool glob_match(const std::string& pat, const std::string& str) {
    std::size_t p = 0, s = 0, star = std::string::npos, mark = 0;
    while (s < str.size()) {
        if (p < pat.size() && (pat[p] == '?' || pat[p] == str[s])) {
            ++p;
            ++s;
        } else if (p < pat.size() && pat[p] == '*') {
            star = p++;
            mark = s;
        } else if (star != std::string::npos) {
            p = star + 1;
            s = ++mark;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*') ++p;
    return p == pat.size();
}

}  // namespace

std::vector<std::string> glob_files(const std::string& pattern) {
    const fs::path pat(pattern);
    const fs::path dir = pat.has_parent_path() ? pat.parent_path() : fs::path(".");
    const std::string leaf = pat.filename().string();
    std::vector<std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        if (glob_match(leaf, e.path().filename().string())) out.push_back(e.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mmhmc
