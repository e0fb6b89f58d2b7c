// Command line front end: plan experiments, dump distance fields, export
// MIP models, evaluate placements, and summarize comparison tables.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <arrayplan/arrayplan.hpp>

namespace {

using namespace arrayplan;

struct CellInputs {
    Environment env;
    NodeGrid grid;
    std::vector<int> users;
    std::array<std::vector<int>, 4> candidates;
};

CellInputs prepare_cell(const std::string& env_path, const std::vector<double>& ratios) {
    CellInputs c{load_environment(env_path), {}, {}, {}};
    c.grid = rasterize(c.env);
    prune_enclosed(c.grid);
    c.users = simplify_cell(c.grid);
    c.candidates = candidate_locations(c.grid, ratios);
    return c;
}

struct GainSourceFlags {
    std::string model;
    std::string gain_file;
    std::string channel_dump;
};

void add_gain_source(CLI::App* cmd, GainSourceFlags& flags) {
    auto* m = cmd->add_option("--model", flags.model,
                              "propagation model: euclidean, shortest_path, shortest_path_angular");
    auto* g = cmd->add_option("--gains", flags.gain_file, "binary gain table to load");
    auto* d = cmd->add_option("--dump", flags.channel_dump, "channel coefficient dump to aggregate");
    m->excludes(g)->excludes(d);
    g->excludes(d);
}

GainMatrix resolve_gains(const GainSourceFlags& flags, const CellInputs& cell,
                         const RadioConfig& radio) {
    if (!flags.gain_file.empty())
        return read_gain_matrix_binary(flags.gain_file, cell.candidates, cell.grid.node_count());
    if (!flags.channel_dump.empty())
        return aggregate_channel_gains(flags.channel_dump, cell.candidates, cell.grid.node_count());
    const std::string model = flags.model.empty() ? "shortest_path_angular" : flags.model;
    if (model == "euclidean")
        return gains_from_distances(euclidean_distance_field(cell.grid, cell.candidates), radio);
    if (model != "shortest_path" && model != "shortest_path_angular")
        throw std::invalid_argument("unknown model \"" + model + "\"");
    const GridGraph graph = build_graph(cell.grid);
    return gains_from_distances(
        distance_field(graph, cell.grid, cell.candidates,
                       model == "shortest_path" ? PathModel::shortest_path
                                                : PathModel::shortest_path_angular),
        radio);
}

struct RadioFlags {
    double carrier_frequency = 3.5e9;
    int antennas = 16;
    double receiver_gain = 1.0;
    double min_power_dbm = -94.0;
    double min_distance = 0.0; // 0: use the grid spacing
};

void add_radio(CLI::App* cmd, RadioFlags& flags) {
    cmd->add_option("--frequency", flags.carrier_frequency, "carrier frequency in Hz");
    cmd->add_option("--antennas", flags.antennas, "antennas per array");
    cmd->add_option("--rx-gain", flags.receiver_gain, "receiver antenna gain (linear)");
    cmd->add_option("--min-power", flags.min_power_dbm, "receiver sensitivity in dBm");
    cmd->add_option("--min-distance", flags.min_distance,
                    "distance floor in meters (default: grid spacing)");
}

RadioConfig make_radio(const RadioFlags& flags, double grid_spacing) {
    RadioConfig radio;
    radio.carrier_frequency = flags.carrier_frequency;
    radio.antennas_per_array = flags.antennas;
    radio.receiver_gain = flags.receiver_gain;
    radio.min_power_dbm = flags.min_power_dbm;
    radio.min_distance = flags.min_distance > 0.0 ? flags.min_distance : grid_spacing;
    validate(radio);
    return radio;
}

int cmd_plan(const std::string& spec_path, const std::string& output_dir, bool tables) {
    ExperimentSpec spec = load_experiment_spec(spec_path);
    if (!output_dir.empty()) spec.output_dir = output_dir;
    const ExperimentResult result = run_experiment(spec, tables);
    for (const std::string& f : result.files) std::cout << "wrote " << f << "\n";
    return 0;
}

int cmd_distances(const std::string& env_path, const std::string& model,
                  const std::vector<double>& ratios, const std::string& out_bin,
                  const std::string& out_csv) {
    const CellInputs cell = prepare_cell(env_path, ratios);
    DistanceField field;
    if (model == "euclidean") {
        field = euclidean_distance_field(cell.grid, cell.candidates);
    } else if (model == "shortest_path" || model == "shortest_path_angular") {
        field = distance_field(build_graph(cell.grid), cell.grid, cell.candidates,
                               model == "shortest_path" ? PathModel::shortest_path
                                                        : PathModel::shortest_path_angular);
    } else {
        throw std::invalid_argument("unknown model \"" + model + "\"");
    }
    if (!out_bin.empty()) {
        write_distance_field_binary(field, out_bin);
        std::cout << "wrote " << out_bin << "\n";
    }
    if (!out_csv.empty()) {
        write_distance_field_csv(field, out_csv);
        std::cout << "wrote " << out_csv << "\n";
    }
    return 0;
}

std::array<int, 4> parse_placement(const std::vector<int>& raw) {
    if (raw.size() != 4)
        throw std::invalid_argument("--placement needs exactly four candidate indices");
    return {raw[0], raw[1], raw[2], raw[3]};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed array placement planner"};
    app.require_subcommand(1);

    std::string spec_path, output_dir;
    bool tables = false;
    auto* plan = app.add_subcommand("plan", "run the full placement experiment for one cell");
    plan->add_option("spec", spec_path, "experiment description (JSON)")->required();
    plan->add_option("--output-dir", output_dir, "override the spec's output directory");
    plan->add_flag("--tables", tables, "also write per-model distance and gain tables");

    std::string env_path, model = "shortest_path_angular", out_bin, out_csv;
    std::vector<double> ratios = default_candidate_ratios();
    auto* dist = app.add_subcommand("distances", "write a per-candidate distance table");
    dist->add_option("environment", env_path, "cell description (JSON)")->required();
    dist->add_option("--model", model, "propagation model")->capture_default_str();
    dist->add_option("--ratios", ratios, "candidate positions along each edge (fractions)")
        ->delimiter(',');
    dist->add_option("--out-bin", out_bin, "binary output path");
    dist->add_option("--out-csv", out_csv, "CSV output path");

    std::string mip_env, mip_out = "placement.lp";
    GainSourceFlags mip_src;
    RadioFlags mip_radio;
    std::vector<double> mip_ratios = default_candidate_ratios();
    double mip_coverage = 1.0;
    auto* mip = app.add_subcommand("export-mip", "write the placement problem in LP format");
    mip->add_option("environment", mip_env, "cell description (JSON)")->required();
    mip->add_option("--coverage", mip_coverage, "required coverage fraction")
        ->capture_default_str();
    mip->add_option("--ratios", mip_ratios, "candidate positions along each edge (fractions)")
        ->delimiter(',');
    mip->add_option("--out", mip_out, "LP output path")->capture_default_str();
    add_gain_source(mip, mip_src);
    add_radio(mip, mip_radio);

    std::string eval_env;
    GainSourceFlags eval_src;
    RadioFlags eval_radio;
    std::vector<double> eval_ratios = default_candidate_ratios();
    std::vector<int> eval_placement;
    double eval_coverage = 1.0;
    auto* eval = app.add_subcommand("evaluate", "evaluate a fixed placement under a gain source");
    eval->add_option("environment", eval_env, "cell description (JSON)")->required();
    eval->add_option("--placement", eval_placement, "candidate index for each array (4 values)")
        ->delimiter(',')
        ->required();
    eval->add_option("--coverage", eval_coverage, "required coverage fraction")
        ->capture_default_str();
    eval->add_option("--ratios", eval_ratios, "candidate positions along each edge (fractions)")
        ->delimiter(',');
    add_gain_source(eval, eval_src);
    add_radio(eval, eval_radio);

    std::vector<std::string> comparison_paths;
    std::string summary_out = "summary.csv";
    auto* summ = app.add_subcommand("summarize", "aggregate comparison tables across cells");
    summ->add_option("tables", comparison_paths, "comparison.csv files, one per cell")
        ->required();
    summ->add_option("--out", summary_out, "summary output path")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed()) return cmd_plan(spec_path, output_dir, tables);
        if (dist->parsed()) {
            if (out_bin.empty() && out_csv.empty())
                throw std::invalid_argument("distances: give --out-bin and/or --out-csv");
            return cmd_distances(env_path, model, ratios, out_bin, out_csv);
        }
        if (mip->parsed()) {
            const CellInputs cell = prepare_cell(mip_env, mip_ratios);
            const RadioConfig radio = make_radio(mip_radio, cell.env.grid_spacing);
            const GainMatrix gain = resolve_gains(mip_src, cell, radio);
            ProblemInstance inst;
            inst.gain = &gain;
            inst.users = cell.users;
            inst.coverage_fraction = mip_coverage;
            inst.min_power_watts = radio.min_power_watts();
            export_mip(inst, mip_out);
            std::cout << "wrote " << mip_out << "\n";
            return 0;
        }
        if (eval->parsed()) {
            const CellInputs cell = prepare_cell(eval_env, eval_ratios);
            const RadioConfig radio = make_radio(eval_radio, cell.env.grid_spacing);
            const GainMatrix gain = resolve_gains(eval_src, cell, radio);
            ProblemInstance inst;
            inst.gain = &gain;
            inst.users = cell.users;
            inst.coverage_fraction = eval_coverage;
            inst.min_power_watts = radio.min_power_watts();
            auto [p_t, covered] = evaluate_placement(inst, parse_placement(eval_placement));
            std::printf("p_t_dbm=%.2f\n", watts_to_dbm(p_t));
            std::printf("p_t_watts=%.17g\n", p_t);
            std::printf("covered_count=%zu\n", covered.size());
            return 0;
        }
        if (summ->parsed()) {
            const auto rows = summarize(read_saving_samples(comparison_paths));
            write_summary_csv(rows, summary_out);
            std::cout << "wrote " << summary_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
