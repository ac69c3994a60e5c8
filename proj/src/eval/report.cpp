#include "ganaug/eval/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ganaug/errors.hpp"

namespace ganaug::eval {

namespace {

std::vector<MetricsRecord> sorted_records(std::vector<MetricsRecord> records) {
    std::sort(records.begin(), records.end(),
              [](const MetricsRecord& a, const MetricsRecord& b) {
                  if (a.strategy != b.strategy)
                      return static_cast<int>(a.strategy) < static_cast<int>(b.strategy);
                  if (a.k != b.k) return a.k < b.k;
                  return a.repetition < b.repetition;
              });
    return records;
}

// Shortest decimal form that parses back to the exact same double.
std::string num(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records) {
    if (records.empty()) throw InvalidInput("no records to summarize");
    std::map<std::pair<int, std::size_t>, std::vector<double>> groups;
    for (const auto& r : records)
        groups[{static_cast<int>(r.strategy), r.k}].push_back(r.f1);
    std::vector<SummaryRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, f1s] : groups) {
        SummaryRow row;
        row.strategy = static_cast<Strategy>(key.first);
        row.k = key.second;
        row.n = static_cast<int>(f1s.size());
        double mean = 0;
        for (double v : f1s) mean += v;
        mean /= double(f1s.size());
        row.f1_mean = mean;
        if (f1s.size() > 1) {
            double ss = 0;
            for (double v : f1s) ss += (v - mean) * (v - mean);
            row.f1_std = std::sqrt(ss / double(f1s.size() - 1));
        }
        rows.push_back(row);
    }
    return rows;
}

void write_results_csv(const std::vector<MetricsRecord>& records,
                       const std::filesystem::path& path) {
    if (records.empty()) throw InvalidInput("no records to write");
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << "strategy,k,repetition,seed,precision,recall,f1,threshold\n";
    for (const auto& r : sorted_records(records)) {
        os << to_string(r.strategy) << ',' << r.k << ',' << r.repetition << ',' << r.seed << ','
           << num(r.precision) << ',' << num(r.recall) << ',' << num(r.f1) << ','
           << num(r.threshold) << '\n';
    }
    if (!os) throw IoError("write failed: " + path.string());
}

std::vector<MetricsRecord> read_results_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty results file: " + path.string());
    if (line == "strategy,k,repetition,seed,precision,recall,f1,threshold\r")
        line.pop_back();
    if (line != "strategy,k,repetition,seed,precision,recall,f1,threshold")
        throw IoError("unexpected results header: " + line);
    std::vector<MetricsRecord> out;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw IoError("malformed results row: " + line);
        MetricsRecord r;
        try {
            r.strategy = strategy_from_string(f[0]);
            r.k = static_cast<std::size_t>(std::stoull(f[1]));
            r.repetition = std::stoi(f[2]);
            r.seed = std::stoull(f[3]);
            r.precision = std::stod(f[4]);
            r.recall = std::stod(f[5]);
            r.f1 = std::stod(f[6]);
            r.threshold = std::stod(f[7]);
        } catch (const std::exception&) {
            throw IoError("malformed results row: " + line);
        }
        out.push_back(r);
    }
    if (out.empty()) throw IoError("results file has no rows: " + path.string());
    return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
    if (rows.empty()) throw InvalidInput("no summary rows to write");
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << "strategy,k,f1_mean,f1_std,n\n";
    char buf[192];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%zu,%.6f,%.6f,%d\n", to_string(r.strategy), r.k,
                      r.f1_mean, r.f1_std, r.n);
        os << buf;
    }
    if (!os) throw IoError("write failed: " + path.string());
}

void emit_report(const std::vector<MetricsRecord>& records,
                 const std::filesystem::path& out_dir) {
    if (records.empty()) throw InvalidInput("no records to report");
    std::filesystem::create_directories(out_dir);
    write_results_csv(records, out_dir / "results.csv");
    write_summary_csv(summarize(records), out_dir / "summary.csv");
    write_f1_plot(records, out_dir / "f1_vs_k.png");
}

} // namespace ganaug::eval
