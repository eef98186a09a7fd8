#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "duolab/harness.hpp"

namespace fs = std::filesystem;

namespace duolab {

namespace {

struct Applicability {
    bool strong = false;
    bool weak = false;
    bool cleansed = false;
    bool tp = false;
    bool fp = false;
    bool cost = false;
};

Applicability applicability_for(Method method) {
    Applicability a;
    switch (method) {
        case Method::Duolab:
        case Method::DuolabKmeans:
            a = {true, true, true, true, true, true};
            break;
        case Method::OnlyStrong:
            a = {true, false, true, true, true, true};
            break;
        case Method::OnlyWeak:
            a = {false, true, true, true, true, false};
            break;
        case Method::CleanAllSuspicious:
            a = {false, false, true, true, true, false};
            break;
        case Method::NoAl:
            a = {false, false, false, true, true, false};
            break;
        case Method::OptFilter:
            a = {false, false, false, true, false, false};
            break;
        case Method::NoFilter:
            a = {true, true, true, false, false, true};
            break;
    }
    return a;
}

std::vector<BatchMetrics> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<BatchMetrics> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        BatchMetrics m = json::parse(line).get<BatchMetrics>();
        m.validate();
        out.push_back(std::move(m));
    }
    return out;
}

std::string format_cell(const std::optional<double>& value, int precision) {
    if (!value) return "-";
    std::ostringstream oss;
    oss << std::fixed << std::setprecision(precision) << *value;
    return oss.str();
}

std::string csv_cell(const std::optional<double>& value) {
    if (!value) return "";
    std::ostringstream oss;
    oss << std::setprecision(17) << *value;
    return oss.str();
}

}  // namespace

ReportRow summarize_run_dir(const std::string& run_dir) {
    fs::path dir(run_dir);
    std::ifstream cfg_in(dir / "config.json");
    if (!cfg_in) throw std::runtime_error("missing config.json in " + run_dir);
    json cfg_json = json::parse(cfg_in);
    Method method = method_from_string(cfg_json.at("method").get<std::string>());
    int strong_cost = cfg_json.at("selection").at("strong_cost").get<int>();

    // All numbers come from the per-batch JSONL, recomputed here.
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("run_", 0) == 0 && name.size() > 6 &&
            name.compare(name.size() - 6, 6, ".jsonl") == 0)
            files.push_back(entry.path());
    }
    if (files.empty()) throw std::runtime_error("no run_*.jsonl files in " + run_dir);
    std::sort(files.begin(), files.end());

    double best_acc_sum = 0.0;
    double strong_sum = 0.0, weak_sum = 0.0, cleansed_sum = 0.0, tp_sum = 0.0, fp_sum = 0.0;
    std::size_t n_batches = 0, n_tp = 0, n_fp = 0;
    for (const fs::path& file : files) {
        std::vector<BatchMetrics> batches = read_jsonl(file);
        double best = 0.0;
        for (const BatchMetrics& m : batches) {
            best = std::max(best, m.test_accuracy);
            strong_sum += m.n_strong;
            weak_sum += m.n_weak;
            cleansed_sum += m.n_cleansed;
            if (m.filter_tp_rate) {
                tp_sum += *m.filter_tp_rate;
                ++n_tp;
            }
            if (m.filter_fp_rate) {
                fp_sum += *m.filter_fp_rate;
                ++n_fp;
            }
            ++n_batches;
        }
        best_acc_sum += best;
    }

    Applicability a = applicability_for(method);
    ReportRow row;
    row.method = method_name(method);
    row.strong_cost = a.cost ? std::optional<int>(strong_cost) : std::nullopt;
    row.acc_pct = 100.0 * best_acc_sum / static_cast<double>(files.size());
    if (n_batches > 0) {
        double n = static_cast<double>(n_batches);
        if (a.strong) row.strong_per_batch = strong_sum / n;
        if (a.weak) row.weak_per_batch = weak_sum / n;
        if (a.cleansed) row.cleansed_per_batch = cleansed_sum / n;
    }
    if (a.tp && n_tp > 0) row.tp_pct = 100.0 * tp_sum / static_cast<double>(n_tp);
    if (a.fp && n_fp > 0) row.fp_pct = 100.0 * fp_sum / static_cast<double>(n_fp);
    return row;
}

Report report(const std::vector<std::string>& run_dirs) {
    Report out;
    for (const std::string& dir : run_dirs) out.rows.push_back(summarize_run_dir(dir));
    return out;
}

std::string Report::to_text() const {
    const std::vector<std::string> headers = {"Method", "c",        "Acc(%)",   "no. S",
                                              "no. W",  "Cleansed", "TP(%)",    "FP(%)"};
    std::vector<std::vector<std::string>> cells;
    for (const ReportRow& row : rows) {
        std::optional<double> cost =
            row.strong_cost ? std::optional<double>(*row.strong_cost) : std::nullopt;
        cells.push_back({row.method, format_cell(cost, 0), format_cell(row.acc_pct, 2),
                         format_cell(row.strong_per_batch, 1), format_cell(row.weak_per_batch, 1),
                         format_cell(row.cleansed_per_batch, 1), format_cell(row.tp_pct, 2),
                         format_cell(row.fp_pct, 2)});
    }

    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        widths[c] = headers[c].size();
        for (const auto& row : cells) widths[c] = std::max(widths[c], row[c].size());
    }

    std::ostringstream oss;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            oss << (c == 0 ? "" : "  ");
            oss << std::setw(static_cast<int>(widths[c])) << (c == 0 ? std::left : std::right)
                << row[c];
        }
        oss << '\n';
    };
    emit(headers);
    std::size_t total = 0;
    for (std::size_t w : widths) total += w + 2;
    oss << std::string(total > 2 ? total - 2 : total, '-') << '\n';
    for (const auto& row : cells) emit(row);
    return oss.str();
}

std::string Report::to_csv() const {
    std::ostringstream oss;
    oss << "method,c,acc_pct,strong_per_batch,weak_per_batch,cleansed_per_batch,tp_pct,fp_pct\n";
    for (const ReportRow& row : rows) {
        std::optional<double> cost =
            row.strong_cost ? std::optional<double>(*row.strong_cost) : std::nullopt;
        oss << row.method << ',' << csv_cell(cost) << ',' << csv_cell(row.acc_pct) << ','
            << csv_cell(row.strong_per_batch) << ',' << csv_cell(row.weak_per_batch) << ','
            << csv_cell(row.cleansed_per_batch) << ',' << csv_cell(row.tp_pct) << ','
            << csv_cell(row.fp_pct) << '\n';
    }
    return oss.str();
}

Report load_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty report csv " + path);

    Report out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        while (fields.size() < 8) fields.emplace_back();

        auto opt = [](const std::string& text) -> std::optional<double> {
            if (text.empty()) return std::nullopt;
            return std::stod(text);
        };
        ReportRow row;
        row.method = fields[0];
        if (!fields[1].empty()) row.strong_cost = std::stoi(fields[1]);
        row.acc_pct = fields[2].empty() ? 0.0 : std::stod(fields[2]);
        row.strong_per_batch = opt(fields[3]);
        row.weak_per_batch = opt(fields[4]);
        row.cleansed_per_batch = opt(fields[5]);
        row.tp_pct = opt(fields[6]);
        row.fp_pct = opt(fields[7]);
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace duolab
