#pragma once

#include <filesystem>
#include <vector>

#include "ganaug/eval/metrics.hpp"

namespace ganaug::eval {

struct SummaryRow {
    Strategy strategy = Strategy::Org;
    std::size_t k = 0;
    double f1_mean = 0;
    double f1_std = 0; // sample std (n-1); 0 when n == 1
    int n = 0;
};

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records);

void write_results_csv(const std::vector<MetricsRecord>& records,
                       const std::filesystem::path& path);
std::vector<MetricsRecord> read_results_csv(const std::filesystem::path& path);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

// Learning-curve plot: one line per strategy, mean F1 vs k with +/- std
// error bars. PNG output.
void write_f1_plot(const std::vector<MetricsRecord>& records,
                   const std::filesystem::path& path);

// results.csv + summary.csv + f1_vs_k.png under out_dir.
void emit_report(const std::vector<MetricsRecord>& records,
                 const std::filesystem::path& out_dir);

} // namespace ganaug::eval
