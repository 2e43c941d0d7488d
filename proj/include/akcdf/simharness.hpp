#ifndef AKCDF_SIMHARNESS_HPP
#define AKCDF_SIMHARNESS_HPP

#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "akcdf/asymptotics.hpp"
#include "akcdf/bandwidth.hpp"
#include "akcdf/distributions.hpp"
#include "akcdf/estimators.hpp"
#include "akcdf/ise.hpp"
#include "akcdf/quadrature.hpp"
#include "akcdf/rng.hpp"

// Monte Carlo comparison harness: draws M replicate samples per
// (distribution, size) cell, fits all selected estimators with their
// respective bandwidth rules on the identical sample, and records the
// integrated squared error of each fit.  Replicates are parallelizable
// because every cell owns its own deterministic RNG stream; outputs are
// byte-identical for any worker count.

namespace akcdf {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SimulationConfig {
    std::vector<int> distributions = {1, 2, 3, 4, 5, 6, 7, 8};  // 1-based
    std::vector<std::size_t> sizes = {256, 1000};
    std::size_t replicates = 1000;
    std::vector<EstimatorKind> estimators = {
        EstimatorKind::Gam, EstimatorKind::IGam, EstimatorKind::LN, EstimatorKind::IGau,
        EstimatorKind::RIG, EstimatorKind::BS, EstimatorKind::W, EstimatorKind::OK,
        EstimatorKind::BK, EstimatorKind::EDF};
    std::uint64_t seed = 20210409;
    QuadratureSpec quadrature;
    BandwidthGrid grid;
    std::size_t limit_reps = 200000;       // per probe point for c(x)
    double limit_b_probe = 1e-4;
    std::string out_dir = ".";
    std::string format = "csv";
    int threads = 1;

    void validate() const {
        if (distributions.empty()) throw ConfigError("no distributions selected");
        for (int i : distributions)
            if (i < 1 || i > 8) throw ConfigError("distribution index out of range 1..8");
        if (sizes.empty()) throw ConfigError("no sample sizes selected");
        for (std::size_t n : sizes)
            if (n < 2) throw ConfigError("sample sizes must be at least 2");
        if (replicates < 1) throw ConfigError("replicates must be at least 1");
        if (estimators.empty()) throw ConfigError("no estimators selected");
        if (format != "csv" && format != "markdown")
            throw ConfigError("format must be csv or markdown");
        if (threads < 1) throw ConfigError("threads must be at least 1");
    }
};

struct IseRecord {
    int dist_index = 0;
    std::string dist_name;
    int estimator_index = 0;
    std::string estimator_name;
    std::size_t n = 0;
    std::size_t replicate = 0;   // 1-based
    double bandwidth = 0.0;
    double ise = 0.0;
    std::string flag;            // "ok" or a failure tag
};

struct SummaryRow {
    int dist_index = 0;
    int estimator_index = 0;
    std::size_t n = 0;
    double mean_ise = 0.0;
    double std_ise = 0.0;
    double diff_to_best = 0.0;
    bool is_best = false;
    std::size_t used = 0;
    std::size_t flagged = 0;
};

struct SummaryTable {
    std::vector<SummaryRow> rows;
};

// --- Config parsing -----------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline EstimatorKind estimator_from_string(const std::string& name) {
    static const std::map<std::string, EstimatorKind> table = {
        {"Gam", EstimatorKind::Gam}, {"IGam", EstimatorKind::IGam},
        {"LN", EstimatorKind::LN},   {"IGau", EstimatorKind::IGau},
        {"RIG", EstimatorKind::RIG}, {"BS", EstimatorKind::BS},
        {"W", EstimatorKind::W},     {"OK", EstimatorKind::OK},
        {"BK", EstimatorKind::BK},   {"EDF", EstimatorKind::EDF}};
    auto it = table.find(name);
    if (it != table.end()) return it->second;
    // numeric index also accepted
    try {
        const int idx = std::stoi(name);
        if (idx >= 1 && idx <= 10) return static_cast<EstimatorKind>(idx - 1);
    } catch (const std::exception&) {
    }
    throw ConfigError("unknown estimator: " + name);
}

} // namespace detail

// Applies one key = value pair; unknown keys are errors.
inline void apply_config_entry(SimulationConfig& cfg, const std::string& key,
                               const std::string& value) {
    try {
        if (key == "seed") {
            cfg.seed = std::stoull(value);
        } else if (key == "replicates") {
            cfg.replicates = std::stoull(value);
        } else if (key == "sizes") {
            cfg.sizes.clear();
            for (const auto& tok : detail::split_csv_list(value))
                cfg.sizes.push_back(std::stoull(tok));
        } else if (key == "distributions") {
            cfg.distributions.clear();
            for (const auto& tok : detail::split_csv_list(value))
                cfg.distributions.push_back(std::stoi(tok));
        } else if (key == "estimators") {
            cfg.estimators.clear();
            for (const auto& tok : detail::split_csv_list(value))
                cfg.estimators.push_back(detail::estimator_from_string(tok));
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else if (key == "format") {
            cfg.format = value;
        } else if (key == "threads") {
            cfg.threads = std::stoi(value);
        } else if (key == "grid_lo") {
            cfg.grid.lo = std::stod(value);
        } else if (key == "grid_hi") {
            cfg.grid.hi = std::stod(value);
        } else if (key == "grid_points_per_decade") {
            cfg.grid.points_per_decade = std::stoi(value);
        } else if (key == "quad_abs_tol") {
            cfg.quadrature.abs_tol = std::stod(value);
        } else if (key == "quad_rel_tol") {
            cfg.quadrature.rel_tol = std::stod(value);
        } else if (key == "quad_max_subdivisions") {
            cfg.quadrature.max_subdivisions = std::stoi(value);
        } else if (key == "limit_reps") {
            cfg.limit_reps = std::stoull(value);
        } else if (key == "limit_b_probe") {
            cfg.limit_b_probe = std::stod(value);
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("bad value for key '" + key + "': " + e.what());
    }
}

inline void load_config_file(SimulationConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(cfg, detail::trim(line.substr(0, eq)),
                           detail::trim(line.substr(eq + 1)));
    }
}

// --- Experiment runner --------------------------------------------------

namespace detail {

// The per-run limit-constant interpolants for the IGau/RIG bandwidths,
// probed once before any replicate work starts.
struct LimitTables {
    std::function<double(double)> igau;
    std::function<double(double)> rig;
};

inline LimitTables probe_limit_constants(const SimulationConfig& cfg) {
    const std::vector<double> probes = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    LimitTables out;
    for (KernelKind kind : {KernelKind::IGau, KernelKind::RIG}) {
        std::vector<LimitConstant> values;
        for (std::size_t p = 0; p < probes.size(); ++p) {
            RngStream rng(cfg.seed,
                          RngStream::cell_index(0xC000 + static_cast<int>(kind), p, 0));
            values.push_back(c_limit(kind, probes[p], cfg.limit_reps, cfg.limit_b_probe, rng));
        }
        auto fn = make_limit_interpolant(values);
        if (kind == KernelKind::IGau)
            out.igau = fn;
        else
            out.rig = fn;
    }
    return out;
}

struct CellTask {
    int dist_pos;        // index into cfg.distributions
    std::size_t size_pos;
    std::size_t replicate;  // 0-based
    std::size_t record_offset;
};

} // namespace detail

inline std::vector<IseRecord> run_experiment(const SimulationConfig& cfg) {
    cfg.validate();
    const std::vector<TargetDistribution> laws = study_distributions();
    const bool needs_limits = [&] {
        for (EstimatorKind e : cfg.estimators)
            if (e == EstimatorKind::IGau || e == EstimatorKind::RIG) return true;
        return false;
    }();
    detail::LimitTables limits;
    if (needs_limits) limits = detail::probe_limit_constants(cfg);
    const std::vector<double> grid = cfg.grid.points();

    std::vector<detail::CellTask> tasks;
    std::size_t offset = 0;
    for (std::size_t di = 0; di < cfg.distributions.size(); ++di)
        for (std::size_t si = 0; si < cfg.sizes.size(); ++si)
            for (std::size_t k = 0; k < cfg.replicates; ++k) {
                tasks.push_back({static_cast<int>(di), si, k, offset});
                offset += cfg.estimators.size();
            }
    std::vector<IseRecord> records(offset);

    auto run_cell = [&](const detail::CellTask& task) {
        const int dist_index = cfg.distributions[task.dist_pos];
        const TargetDistribution& law = laws[dist_index - 1];
        const std::size_t n = cfg.sizes[task.size_pos];
        RngStream rng(cfg.seed, RngStream::cell_index(dist_index, n, task.replicate));

        std::string cell_flag;
        Sample sample({1.0});
        try {
            sample = Sample(law.sample(rng, n), cfg.seed, law.name());
        } catch (const std::exception&) {
            cell_flag = "sampling_error";
        }
        bool have_ref = false;
        GammaReference ref;
        if (cell_flag.empty()) {
            try {
                ref = fit_gamma_mle(sample);
                have_ref = true;
            } catch (const std::exception&) {
            }
        }

        for (std::size_t ei = 0; ei < cfg.estimators.size(); ++ei) {
            const EstimatorKind kind = cfg.estimators[ei];
            IseRecord rec;
            rec.dist_index = dist_index;
            rec.dist_name = law.name();
            rec.estimator_index = estimator_index(kind);
            rec.estimator_name = estimator_name(kind);
            rec.n = n;
            rec.replicate = task.replicate + 1;
            rec.flag = "ok";
            try {
                if (!cell_flag.empty()) throw std::runtime_error(cell_flag);
                double b = 0.0;
                switch (kind) {
                    case EstimatorKind::Gam:
                    case EstimatorKind::IGam:
                    case EstimatorKind::LN:
                        if (!have_ref) throw BandwidthError("reference fit failed");
                        b = b_opt_closed_form(to_kernel_kind(kind), ref, n, cfg.quadrature);
                        break;
                    case EstimatorKind::IGau:
                        if (!have_ref) throw BandwidthError("reference fit failed");
                        b = b_opt_with_limit(KernelKind::IGau, ref, n, limits.igau,
                                             cfg.quadrature);
                        break;
                    case EstimatorKind::RIG:
                        if (!have_ref) throw BandwidthError("reference fit failed");
                        b = b_opt_with_limit(KernelKind::RIG, ref, n, limits.rig,
                                             cfg.quadrature);
                        if (b >= 1.0) throw BandwidthError("RIG bandwidth reached 1");
                        break;
                    case EstimatorKind::BS:
                    case EstimatorKind::W:
                        if (!have_ref) throw BandwidthError("reference fit failed");
                        b = b_opt_numeric(to_kernel_kind(kind), ref, n, cfg.quadrature);
                        break;
                    case EstimatorKind::OK:
                        b = select_lno(sample, grid);
                        break;
                    case EstimatorKind::BK:
                        b = select_cv(sample, grid);
                        break;
                    case EstimatorKind::EDF:
                        b = 0.0;
                        break;
                }
                const FittedEstimator est(kind, sample, b);
                rec.bandwidth = b;
                rec.ise = ise(est, law, cfg.quadrature);
            } catch (const QuadratureError& e) {
                rec.flag = "quadrature_error";
                rec.ise = e.best_estimate.value;
            } catch (const BandwidthError&) {
                rec.flag = "bandwidth_error";
            } catch (const std::exception&) {
                rec.flag = "error";
            }
            records[task.record_offset + ei] = rec;
        }
    };

    if (cfg.threads <= 1) {
        for (const auto& task : tasks) run_cell(task);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                run_cell(tasks[i]);
            }
        };
        std::vector<std::thread> pool;
        const int nthreads = std::min<int>(cfg.threads, static_cast<int>(tasks.size()));
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

// --- Summaries ----------------------------------------------------------

inline SummaryTable summarize(const std::vector<IseRecord>& records) {
    if (records.empty()) throw std::domain_error("summarize: no records");
    // Deterministic (dist, n, estimator) grouping.
    std::map<std::tuple<int, std::size_t, int>, std::pair<std::vector<double>, std::size_t>> cells;
    for (const auto& r : records) {
        auto& cell = cells[{r.dist_index, r.n, r.estimator_index}];
        if (r.flag == "ok")
            cell.first.push_back(r.ise);
        else
            ++cell.second;
    }
    SummaryTable table;
    for (const auto& [key, cell] : cells) {
        const auto& values = cell.first;
        SummaryRow row;
        row.dist_index = std::get<0>(key);
        row.n = std::get<1>(key);
        row.estimator_index = std::get<2>(key);
        row.used = values.size();
        row.flagged = cell.second;
        if (values.empty())
            throw std::runtime_error(
                "summarize: all replicates flagged for dist " + std::to_string(row.dist_index)
                + ", estimator " + std::to_string(row.estimator_index)
                + ", n " + std::to_string(row.n));
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        row.mean_ise = mean;
        row.std_ise = values.size() > 1
            ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
        table.rows.push_back(row);
    }
    // Differences to the row-best mean within each (dist, n).
    std::map<std::pair<int, std::size_t>, double> best;
    for (const auto& row : table.rows) {
        auto key = std::make_pair(row.dist_index, row.n);
        auto it = best.find(key);
        if (it == best.end() || row.mean_ise < it->second) best[key] = row.mean_ise;
    }
    for (auto& row : table.rows) {
        const double b = best[{row.dist_index, row.n}];
        row.diff_to_best = row.mean_ise - b;
        row.is_best = (row.mean_ise == b);
    }
    return table;
}

// --- Serialization ------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline constexpr const char* kRecordsCsvHeader =
    "dist_index,dist_name,estimator_index,estimator_name,n,replicate,bandwidth,ise,flag";
inline constexpr const char* kSummaryCsvHeader =
    "dist_index,estimator_index,n,mean_ise,std_ise,diff_to_best,is_best";

inline std::string records_to_csv(const std::vector<IseRecord>& records) {
    std::string out = kRecordsCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += std::to_string(r.dist_index);
        out += ',';
        out += r.dist_name;
        out += ',';
        out += std::to_string(r.estimator_index);
        out += ',';
        out += r.estimator_name;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.replicate);
        out += ',';
        out += detail::format_double(r.bandwidth);
        out += ',';
        out += detail::format_double(r.ise);
        out += ',';
        out += r.flag;
        out += '\n';
    }
    return out;
}

inline std::vector<IseRecord> parse_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kRecordsCsvHeader)
        throw std::runtime_error("parse_records_csv: bad or missing header");
    std::vector<IseRecord> out;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() == 8) fields.push_back("");  // empty trailing flag
        if (fields.size() < 9)
            throw std::runtime_error("parse_records_csv: wrong field count: " + line);
        // dist_name is the only field that may itself contain commas
        // (e.g. "Burr(1,3,1)"), so rejoin any surplus splits into it.
        while (fields.size() > 9) {
            fields[1] += ',' + fields[2];
            fields.erase(fields.begin() + 2);
        }
        IseRecord r;
        r.dist_index = std::stoi(fields[0]);
        r.dist_name = fields[1];
        r.estimator_index = std::stoi(fields[2]);
        r.estimator_name = fields[3];
        r.n = std::stoull(fields[4]);
        r.replicate = std::stoull(fields[5]);
        r.bandwidth = std::stod(fields[6]);
        r.ise = std::stod(fields[7]);
        r.flag = fields[8];
        out.push_back(r);
    }
    return out;
}

inline std::string summary_to_csv(const SummaryTable& table) {
    std::string out = kSummaryCsvHeader;
    out += '\n';
    for (const auto& r : table.rows) {
        out += std::to_string(r.dist_index);
        out += ',';
        out += std::to_string(r.estimator_index);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += detail::format_double(r.mean_ise);
        out += ',';
        out += detail::format_double(r.std_ise);
        out += ',';
        out += detail::format_double(r.diff_to_best);
        out += ',';
        out += (r.is_best ? '1' : '0');
        out += '\n';
    }
    return out;
}

inline SummaryTable parse_summary_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kSummaryCsvHeader)
        throw std::runtime_error("parse_summary_csv: bad or missing header");
    SummaryTable table;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 7)
            throw std::runtime_error("parse_summary_csv: wrong field count: " + line);
        SummaryRow r;
        r.dist_index = std::stoi(fields[0]);
        r.estimator_index = std::stoi(fields[1]);
        r.n = std::stoull(fields[2]);
        r.mean_ise = std::stod(fields[3]);
        r.std_ise = std::stod(fields[4]);
        r.diff_to_best = std::stod(fields[5]);
        r.is_best = (fields[6] == "1");
        table.rows.push_back(r);
    }
    return table;
}

// Mean/std and difference tables in the layout of the study: one row
// per (distribution, n), one column per estimator, values scaled by
// 10^4.
inline std::string summary_to_markdown(const SummaryTable& table) {
    std::vector<int> estimators;
    std::map<std::pair<int, std::size_t>, std::map<int, const SummaryRow*>> rows;
    for (const auto& r : table.rows) {
        rows[{r.dist_index, r.n}][r.estimator_index] = &r;
        bool seen = false;
        for (int e : estimators) seen = seen || (e == r.estimator_index);
        if (!seen) estimators.push_back(r.estimator_index);
    }
    std::sort(estimators.begin(), estimators.end());
    std::ostringstream out;
    auto emit_table = [&](const char* title, auto cell_value) {
        out << "## " << title << " (values x 1e4)\n\n|dist|n|";
        for (int e : estimators)
            out << estimator_name(static_cast<EstimatorKind>(e - 1)) << "|";
        out << "\n|---|---|";
        for (std::size_t i = 0; i < estimators.size(); ++i) out << "---|";
        out << "\n";
        for (const auto& [key, cols] : rows) {
            out << "|" << key.first << "|" << key.second << "|";
            for (int e : estimators) {
                auto it = cols.find(e);
                if (it == cols.end()) {
                    out << "-|";
                    continue;
                }
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.2f", cell_value(*it->second) * 1e4);
                out << buf;
                if (it->second->is_best) out << " *";
                out << "|";
            }
            out << "\n";
        }
        out << "\n";
    };
    emit_table("Mean ISE", [](const SummaryRow& r) { return r.mean_ise; });
    emit_table("Std ISE", [](const SummaryRow& r) { return r.std_ise; });
    emit_table("Difference to row best", [](const SummaryRow& r) { return r.diff_to_best; });
    // Column totals of the differences.
    out << "## Totals of differences to row best (x 1e4)\n\n|n|";
    for (int e : estimators) out << estimator_name(static_cast<EstimatorKind>(e - 1)) << "|";
    out << "\n|---|";
    for (std::size_t i = 0; i < estimators.size(); ++i) out << "---|";
    out << "\n";
    std::map<std::size_t, std::map<int, double>> totals;
    for (const auto& r : table.rows) totals[r.n][r.estimator_index] += r.diff_to_best;
    for (const auto& [n, cols] : totals) {
        out << "|" << n << "|";
        for (int e : estimators) {
            char buf[64];
            auto it = cols.find(e);
            std::snprintf(buf, sizeof(buf), "%.2f", (it == cols.end() ? 0.0 : it->second) * 1e4);
            out << buf << "|";
        }
        out << "\n";
    }
    return out.str();
}

} // namespace akcdf

#endif
