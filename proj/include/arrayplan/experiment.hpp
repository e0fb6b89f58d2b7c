#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "channel_dump.hpp"
#include "distance_field.hpp"
#include "environment.hpp"
#include "gain_table.hpp"
#include "node_grid.hpp"
#include "placement.hpp"

namespace arrayplan {

inline const std::vector<std::string>& known_models() {
    static const std::vector<std::string> names = {"euclidean", "shortest_path",
                                                   "shortest_path_angular"};
    return names;
}

inline std::vector<double> default_coverage_levels() {
    std::vector<double> levels;
    for (int i = 100; i >= 90; --i) levels.push_back(i / 100.0);
    return levels;
}

inline std::vector<double> default_candidate_ratios() {
    std::vector<double> ratios;
    for (int i = 0; i <= 10; ++i) ratios.push_back(i / 10.0);
    return ratios;
}

struct ExperimentSpec {
    std::string environment_path;
    std::vector<std::string> models = known_models();
    std::vector<double> coverage_levels = default_coverage_levels();
    std::vector<double> candidate_ratios = default_candidate_ratios();
    RadioConfig radio;
    std::optional<double> min_distance_override; // default: the grid spacing
    std::string output_dir = ".";
    // ground truth for re-evaluating placements; at most one may be set
    std::string evaluation_model;
    std::string evaluation_gain_file;
    std::string evaluation_channel_dump;
};

inline void validate(const ExperimentSpec& spec) {
    if (spec.environment_path.empty())
        throw std::invalid_argument("experiment: environment path missing");
    if (spec.models.empty()) throw std::invalid_argument("experiment: no models selected");
    for (const std::string& m : spec.models) {
        if (std::find(known_models().begin(), known_models().end(), m) == known_models().end())
            throw std::invalid_argument("experiment: unknown model \"" + m + "\"");
    }
    for (std::size_t i = 0; i + 1 < spec.models.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.models.size(); ++j) {
            if (spec.models[i] == spec.models[j])
                throw std::invalid_argument("experiment: duplicate model \"" + spec.models[i] + "\"");
        }
    }
    if (spec.coverage_levels.empty())
        throw std::invalid_argument("experiment: no coverage levels");
    for (double v : spec.coverage_levels) {
        if (!(v > 0.0) || v > 1.0)
            throw std::invalid_argument("experiment: coverage levels must lie in (0, 1]");
    }
    for (std::size_t i = 0; i + 1 < spec.coverage_levels.size(); ++i) {
        if (spec.coverage_levels[i] < spec.coverage_levels[i + 1])
            throw std::invalid_argument("experiment: coverage levels must be sorted descending");
    }
    if (spec.candidate_ratios.empty())
        throw std::invalid_argument("experiment: no candidate ratios");
    int sources = 0;
    sources += !spec.evaluation_model.empty();
    sources += !spec.evaluation_gain_file.empty();
    sources += !spec.evaluation_channel_dump.empty();
    if (sources > 1)
        throw std::invalid_argument("experiment: multiple evaluation gain sources configured");
    if (!spec.evaluation_model.empty() &&
        std::find(known_models().begin(), known_models().end(), spec.evaluation_model) ==
            known_models().end())
        throw std::invalid_argument("experiment: unknown evaluation model \"" +
                                    spec.evaluation_model + "\"");
}

inline ExperimentSpec experiment_spec_from_json(const nlohmann::json& j) {
    ExperimentSpec spec;
    spec.environment_path = j.at("environment").get<std::string>();
    if (j.contains("models")) spec.models = j.at("models").get<std::vector<std::string>>();
    if (j.contains("coverage_levels"))
        spec.coverage_levels = j.at("coverage_levels").get<std::vector<double>>();
    if (j.contains("candidate_ratios"))
        spec.candidate_ratios = j.at("candidate_ratios").get<std::vector<double>>();
    if (j.contains("carrier_frequency_hz"))
        spec.radio.carrier_frequency = j.at("carrier_frequency_hz").get<double>();
    if (j.contains("antennas_per_array"))
        spec.radio.antennas_per_array = j.at("antennas_per_array").get<int>();
    if (j.contains("receiver_gain")) spec.radio.receiver_gain = j.at("receiver_gain").get<double>();
    if (j.contains("min_power_dbm")) spec.radio.min_power_dbm = j.at("min_power_dbm").get<double>();
    if (j.contains("min_distance_m"))
        spec.min_distance_override = j.at("min_distance_m").get<double>();
    if (j.contains("output_dir")) spec.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("evaluation")) {
        const auto& e = j.at("evaluation");
        if (e.contains("model")) spec.evaluation_model = e.at("model").get<std::string>();
        if (e.contains("gain_file")) spec.evaluation_gain_file = e.at("gain_file").get<std::string>();
        if (e.contains("channel_dump"))
            spec.evaluation_channel_dump = e.at("channel_dump").get<std::string>();
    }
    validate(spec);
    return spec;
}

inline ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open experiment file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("experiment file " + path + ": " + e.what());
    }
    try {
        return experiment_spec_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("experiment file " + path + ": " + e.what());
    }
}

struct PlacementRecord {
    std::string model;
    double coverage_fraction = 0.0;
    std::array<int, 4> placement{-1, -1, -1, -1}; // candidate index per array
    std::array<int, 4> nodes{-1, -1, -1, -1};     // resolved node ids
    double p_t_watts = 0.0;
    double p_t_dbm = 0.0;
    int covered_count = 0;
};

struct ComparisonRecord {
    double coverage_fraction = 0.0;
    // aligned with the experiment's model list
    std::vector<double> own_dbm;
    std::vector<double> eval_dbm;
    std::vector<double> saving_db; // NaN for the baseline itself / no baseline
};

struct ExperimentResult {
    std::vector<std::string> models;
    std::vector<double> levels;
    std::vector<int> users;
    std::vector<PlacementRecord> placements;
    std::vector<ComparisonRecord> comparison; // empty when no evaluator configured
    std::vector<std::string> files;
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

class OutputSet {
  public:
    explicit OutputSet(std::vector<std::string>& sink) : sink_(sink) {}
    ~OutputSet() {
        if (committed_) return;
        for (const std::string& p : paths_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }
    std::string track(std::string path) {
        paths_.push_back(path);
        return path;
    }
    void commit() {
        committed_ = true;
        sink_.insert(sink_.end(), paths_.begin(), paths_.end());
    }

  private:
    std::vector<std::string>& sink_;
    std::vector<std::string> paths_;
    bool committed_ = false;
};

} // namespace detail

// Full pipeline for one cell: build the grid, compute per-model gains,
// optimize per model and coverage level, optionally re-evaluate everything
// under one ground-truth gain matrix, and write the result tables. Files are
// removed again if any stage fails, so output directories never hold a
// partial run. Set write_field_tables to also dump per-model distance and
// gain tables next to the result CSVs.
inline ExperimentResult run_experiment(const ExperimentSpec& spec,
                                       bool write_field_tables = false) {
    validate(spec);
    const Environment env = load_environment(spec.environment_path);
    RadioConfig radio = spec.radio;
    radio.min_distance = spec.min_distance_override.value_or(env.grid_spacing);
    validate(radio);

    NodeGrid grid = rasterize(env);
    prune_enclosed(grid);
    const std::vector<int> users = simplify_cell(grid);
    if (users.empty()) throw std::runtime_error("experiment: simplified cell has no user locations");
    const auto candidates = candidate_locations(grid, spec.candidate_ratios);

    bool need_graph = spec.evaluation_model == "shortest_path" ||
                      spec.evaluation_model == "shortest_path_angular";
    for (const std::string& m : spec.models) need_graph = need_graph || m != "euclidean";
    GridGraph graph;
    if (need_graph) graph = build_graph(grid);

    auto field_for = [&](const std::string& model) {
        if (model == "euclidean") return euclidean_distance_field(grid, candidates);
        return distance_field(graph, grid, candidates,
                              model == "shortest_path" ? PathModel::shortest_path
                                                       : PathModel::shortest_path_angular);
    };

    ExperimentResult result;
    result.models = spec.models;
    result.levels = spec.coverage_levels;
    result.users = users;

    std::filesystem::create_directories(spec.output_dir);
    detail::OutputSet outputs(result.files);
    const std::filesystem::path dir(spec.output_dir);

    std::map<std::string, GainMatrix> gains;
    for (const std::string& model : spec.models) {
        DistanceField field = field_for(model);
        if (write_field_tables) {
            write_distance_field_binary(field, outputs.track((dir / (model + "_distances.bin")).string()));
            write_distance_field_csv(field, outputs.track((dir / (model + "_distances.csv")).string()));
        }
        GainMatrix m = gains_from_distances(field, radio);
        if (write_field_tables) {
            write_gain_matrix_binary(m, outputs.track((dir / (model + "_gains.bin")).string()));
            write_gain_matrix_csv(m, outputs.track((dir / (model + "_gains.csv")).string()));
        }
        gains.emplace(model, std::move(m));
    }

    // candidate map: resolves candidate indices to lattice positions
    {
        std::ofstream out(outputs.track((dir / "candidates.csv").string()));
        if (!out) throw std::runtime_error("cannot open for writing: candidates.csv");
        out << "array_id,candidate_id,node_id,x_m,y_m\n";
        for (int t = 0; t < 4; ++t) {
            for (std::size_t l = 0; l < candidates[t].size(); ++l) {
                const Point p = grid.coord(candidates[t][l]);
                out << t << ',' << l << ',' << candidates[t][l] << ','
                    << detail::fmt("%g", p.x) << ',' << detail::fmt("%g", p.y) << "\n";
            }
        }
    }

    for (const std::string& model : spec.models) {
        ProblemInstance inst;
        inst.gain = &gains.at(model);
        inst.users = users;
        inst.min_power_watts = radio.min_power_watts();
        const std::vector<SweepRow> rows = sweep_coverage(inst, spec.coverage_levels);
        for (const SweepRow& row : rows) {
            PlacementRecord rec;
            rec.model = model;
            rec.coverage_fraction = row.coverage_fraction;
            rec.placement = row.placement;
            for (int t = 0; t < 4; ++t) rec.nodes[t] = candidates[t][row.placement[t]];
            rec.p_t_watts = row.p_t_watts;
            rec.p_t_dbm = row.p_t_dbm;
            rec.covered_count = row.covered_count;
            result.placements.push_back(rec);
        }
    }

    {
        std::ofstream out(outputs.track((dir / "placements.csv").string()));
        if (!out) throw std::runtime_error("cannot open for writing: placements.csv");
        out << "model,v_s,l1_x,l1_y,l2_x,l2_y,l3_x,l3_y,l4_x,l4_y,p_t_dbm,covered_count\n";
        for (const PlacementRecord& rec : result.placements) {
            out << rec.model << ',' << detail::fmt("%g", rec.coverage_fraction);
            for (int t = 0; t < 4; ++t) {
                const Point p = grid.coord(rec.nodes[t]);
                out << ',' << detail::fmt("%g", p.x) << ',' << detail::fmt("%g", p.y);
            }
            out << ',' << detail::fmt("%.2f", rec.p_t_dbm) << ',' << rec.covered_count << "\n";
        }
    }

    const bool has_eval = !spec.evaluation_model.empty() || !spec.evaluation_gain_file.empty() ||
                          !spec.evaluation_channel_dump.empty();
    if (has_eval) {
        GainMatrix eval_gain;
        if (!spec.evaluation_model.empty()) {
            auto it = gains.find(spec.evaluation_model);
            if (it != gains.end()) {
                eval_gain = it->second;
            } else {
                eval_gain = gains_from_distances(field_for(spec.evaluation_model), radio);
            }
        } else if (!spec.evaluation_gain_file.empty()) {
            eval_gain = read_gain_matrix_binary(spec.evaluation_gain_file, candidates,
                                                grid.node_count());
        } else {
            eval_gain = aggregate_channel_gains(spec.evaluation_channel_dump, candidates,
                                                grid.node_count());
        }

        ProblemInstance eval_inst;
        eval_inst.gain = &eval_gain;
        eval_inst.users = users;
        eval_inst.min_power_watts = radio.min_power_watts();

        const auto baseline =
            std::find(spec.models.begin(), spec.models.end(), "euclidean") - spec.models.begin();
        const bool has_baseline = static_cast<std::size_t>(baseline) < spec.models.size();

        for (double level : spec.coverage_levels) {
            ComparisonRecord rec;
            rec.coverage_fraction = level;
            eval_inst.coverage_fraction = level;
            for (const std::string& model : spec.models) {
                const PlacementRecord* placed = nullptr;
                for (const PlacementRecord& p : result.placements) {
                    if (p.model == model && p.coverage_fraction == level) placed = &p;
                }
                if (!placed) throw std::logic_error("experiment: placement row missing");
                auto [p_eval, covered] = evaluate_placement(eval_inst, placed->placement);
                rec.own_dbm.push_back(placed->p_t_dbm);
                rec.eval_dbm.push_back(watts_to_dbm(p_eval));
            }
            for (std::size_t m = 0; m < spec.models.size(); ++m) {
                if (!has_baseline || m == static_cast<std::size_t>(baseline)) {
                    rec.saving_db.push_back(std::numeric_limits<double>::quiet_NaN());
                } else {
                    rec.saving_db.push_back(rec.eval_dbm[baseline] - rec.eval_dbm[m]);
                }
            }
            result.comparison.push_back(std::move(rec));
        }

        std::ofstream out(outputs.track((dir / "comparison.csv").string()));
        if (!out) throw std::runtime_error("cannot open for writing: comparison.csv");
        out << "v_s";
        for (const std::string& m : spec.models) out << ",p_t_" << m << "_dbm";
        for (const std::string& m : spec.models) out << ",p_t_eval_" << m << "_dbm";
        for (std::size_t m = 0; m < spec.models.size(); ++m) {
            if (has_baseline && m != static_cast<std::size_t>(baseline))
                out << ",saving_" << spec.models[m] << "_db";
        }
        out << "\n";
        std::ofstream bin(outputs.track((dir / "comparison.bin").string()), std::ios::binary);
        for (const ComparisonRecord& rec : result.comparison) {
            out << detail::fmt("%g", rec.coverage_fraction);
            detail::put_f64(bin, rec.coverage_fraction);
            for (double v : rec.own_dbm) {
                out << ',' << detail::fmt("%.2f", v);
                detail::put_f64(bin, v);
            }
            for (double v : rec.eval_dbm) {
                out << ',' << detail::fmt("%.2f", v);
                detail::put_f64(bin, v);
            }
            for (std::size_t m = 0; m < rec.saving_db.size(); ++m) {
                if (has_baseline && m != static_cast<std::size_t>(baseline)) {
                    out << ',' << detail::fmt("%.6f", rec.saving_db[m]);
                    detail::put_f64(bin, rec.saving_db[m]);
                }
            }
            out << "\n";
        }
    }

    outputs.commit();
    return result;
}

struct SummaryRow {
    std::string model;
    double coverage_fraction = 0.0;
    int count = 0;
    double min_db = 0.0, p25_db = 0.0, p50_db = 0.0, p75_db = 0.0, max_db = 0.0, mean_db = 0.0;
};

// Nearest-rank percentile on an ascending-sorted list: the smallest entry
// whose rank is at least fraction*n.
inline double nearest_rank(const std::vector<double>& sorted_values, double fraction) {
    const int n = static_cast<int>(sorted_values.size());
    if (n == 0) throw std::invalid_argument("nearest_rank: empty input");
    int rank = static_cast<int>(std::ceil(fraction * n));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted_values[rank - 1];
}

// Per (model, level) statistics of the power saving across cells. Input
// rows come from one comparison table per cell.
struct SavingSample {
    std::string model;
    double coverage_fraction = 0.0;
    double saving_db = 0.0;
};

inline std::vector<SummaryRow> summarize(std::vector<SavingSample> samples) {
    if (samples.empty()) throw std::invalid_argument("summarize: no rows");
    std::map<std::pair<std::string, double>, std::vector<double>> groups;
    for (const SavingSample& s : samples) {
        groups[{s.model, s.coverage_fraction}].push_back(s.saving_db);
    }
    std::vector<SummaryRow> out;
    for (auto& [key, vals] : groups) {
        std::sort(vals.begin(), vals.end());
        SummaryRow row;
        row.model = key.first;
        row.coverage_fraction = key.second;
        row.count = static_cast<int>(vals.size());
        row.min_db = vals.front();
        row.p25_db = nearest_rank(vals, 0.25);
        row.p50_db = nearest_rank(vals, 0.50);
        row.p75_db = nearest_rank(vals, 0.75);
        row.max_db = vals.back();
        double sum = 0.0;
        for (double v : vals) sum += v;
        row.mean_db = sum / vals.size();
        out.push_back(row);
    }
    std::sort(out.begin(), out.end(), [](const SummaryRow& a, const SummaryRow& b) {
        if (a.model != b.model) return a.model < b.model;
        return a.coverage_fraction > b.coverage_fraction;
    });
    return out;
}

// Pulls the saving columns out of comparison tables written by
// run_experiment; one file per cell.
inline std::vector<SavingSample> read_saving_samples(const std::vector<std::string>& csv_paths) {
    std::vector<SavingSample> samples;
    for (const std::string& path : csv_paths) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open comparison table: " + path);
        std::string header;
        if (!std::getline(in, header))
            throw std::invalid_argument("comparison table " + path + ": empty file");
        std::vector<std::string> cols;
        {
            std::istringstream ss(header);
            std::string c;
            while (std::getline(ss, c, ',')) cols.push_back(c);
        }
        if (cols.empty() || cols[0] != "v_s")
            throw std::invalid_argument("comparison table " + path + ": unexpected header");
        std::vector<std::pair<std::size_t, std::string>> saving_cols;
        for (std::size_t i = 1; i < cols.size(); ++i) {
            const std::string& c = cols[i];
            if (c.rfind("saving_", 0) == 0 && c.size() > 10 &&
                c.compare(c.size() - 3, 3, "_db") == 0) {
                saving_cols.push_back({i, c.substr(7, c.size() - 10)});
            }
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> fields;
            std::istringstream ss(line);
            std::string f;
            while (std::getline(ss, f, ',')) fields.push_back(f);
            if (fields.size() != cols.size())
                throw std::invalid_argument("comparison table " + path + ": ragged row");
            const double level = std::stod(fields[0]);
            for (const auto& [idx, model] : saving_cols) {
                samples.push_back({model, level, std::stod(fields[idx])});
            }
        }
    }
    return samples;
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "model,v_s,count,min_db,p25_db,p50_db,p75_db,max_db,mean_db\n";
    for (const SummaryRow& r : rows) {
        out << r.model << ',' << detail::fmt("%g", r.coverage_fraction) << ',' << r.count << ','
            << detail::fmt("%.6f", r.min_db) << ',' << detail::fmt("%.6f", r.p25_db) << ','
            << detail::fmt("%.6f", r.p50_db) << ',' << detail::fmt("%.6f", r.p75_db) << ','
            << detail::fmt("%.6f", r.max_db) << ',' << detail::fmt("%.6f", r.mean_db) << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace arrayplan
