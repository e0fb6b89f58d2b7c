#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <arrayplan/channel_dump.hpp>
#include <arrayplan/distance_field.hpp>
#include <arrayplan/gain_table.hpp>
#include <arrayplan/radio.hpp>

using namespace arrayplan;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("arrayplan_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

DistanceField tiny_field() {
    DistanceField f;
    f.node_count = 3;
    f.model = "euclidean";
    for (int t = 0; t < 4; ++t) {
        f.candidates[t] = {t};
        f.dist[t] = {{10.0, 250.0, std::numeric_limits<double>::quiet_NaN()}};
    }
    f.dist[1][0][0] = 0.25; // below the floor
    return f;
}

} // namespace

TEST_CASE("decibel-milliwatt conversions") {
    CHECK(rel_diff(dbm_to_watts(-94.0), std::pow(10.0, -12.4)) < 1e-15);
    CHECK(rel_diff(dbm_to_watts(0.0), 1e-3) < 1e-15);
    CHECK(rel_diff(dbm_to_watts(30.0), 1.0) < 1e-15);
    CHECK(std::abs(watts_to_dbm(dbm_to_watts(-61.37)) - -61.37) < 1e-12);
}

TEST_CASE("radio defaults and validation") {
    RadioConfig cfg;
    CHECK(cfg.carrier_frequency == 3.5e9);
    CHECK(cfg.antennas_per_array == 16);
    CHECK(cfg.receiver_gain == 1.0);
    CHECK(cfg.min_power_dbm == -94.0);
    CHECK(cfg.wavelength() == kSpeedOfLight / 3.5e9);
    CHECK(cfg.transmitter_gain() == 16.0);
    CHECK(rel_diff(cfg.min_power_watts(), std::pow(10.0, -12.4)) < 1e-15);

    RadioConfig bad = cfg;
    bad.carrier_frequency = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.antennas_per_array = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.receiver_gain = -1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.min_distance = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("free space gain follows the quadratic distance law") {
    RadioConfig cfg;
    const double lambda = cfg.wavelength();
    // reference computed from the aperture form
    const double expected_100 =
        16.0 * 1.0 * std::pow(lambda / (4.0 * std::numbers::pi * 100.0), 2.0);
    CHECK(rel_diff(free_space_gain(100.0, cfg), expected_100) < 1e-12);
    CHECK(rel_diff(free_space_gain(100.0, cfg) / free_space_gain(200.0, cfg), 4.0) < 1e-12);

    // clamp below the floor
    CHECK(free_space_gain(0.25, cfg) == free_space_gain(cfg.min_distance, cfg));
    CHECK(free_space_gain(0.0, cfg) == free_space_gain(cfg.min_distance, cfg));
}

TEST_CASE("gain matrix from a distance field") {
    RadioConfig cfg;
    const DistanceField f = tiny_field();
    const GainMatrix m = gains_from_distances(f, cfg);
    CHECK(m.node_count == 3);
    CHECK(m.provenance == "euclidean");
    CHECK(m.gain[0][0][0] == free_space_gain(10.0, cfg));
    CHECK(m.gain[0][0][1] == free_space_gain(250.0, cfg));
    CHECK(std::isnan(m.gain[0][0][2]));
    CHECK(m.gain[1][0][0] == free_space_gain(1.0, cfg)); // clamped
    CHECK(m.gain[0][0][0] > m.gain[0][0][1]);
}

TEST_CASE("binary gain table round trip") {
    const auto dir = temp_dir("gain_bin");
    RadioConfig cfg;
    const GainMatrix m = gains_from_distances(tiny_field(), cfg);
    const auto path = (dir / "gains.bin").string();
    write_gain_matrix_binary(m, path);
    write_gain_matrix_binary(m, (dir / "gains2.bin").string());
    CHECK(slurp(dir / "gains.bin") == slurp(dir / "gains2.bin"));

    const GainMatrix back = read_gain_matrix_binary(path, m.candidates, m.node_count);
    CHECK(back.provenance == "file:" + path);
    for (int t = 0; t < 4; ++t) {
        REQUIRE(back.gain[t].size() == m.gain[t].size());
        for (std::size_t l = 0; l < m.gain[t].size(); ++l) {
            for (int i = 0; i < m.node_count; ++i) {
                if (std::isnan(m.gain[t][l][i])) {
                    CHECK(std::isnan(back.gain[t][l][i]));
                } else {
                    CHECK(back.gain[t][l][i] == m.gain[t][l][i]);
                }
            }
        }
    }
    // six doubles per record
    CHECK(std::filesystem::file_size(path) == 4 * 1 * 3 * 6 * 8);
}

TEST_CASE("truncated binary table fails loudly") {
    const auto dir = temp_dir("gain_trunc");
    const auto path = (dir / "bad.bin").string();
    std::ofstream(path, std::ios::binary) << "abc";
    CHECK_THROWS_WITH(read_gain_matrix_binary(path, tiny_field().candidates, 3),
                      "binary table: truncated record");
}

TEST_CASE("distance tables in both formats") {
    const auto dir = temp_dir("dist_tables");
    const DistanceField f = tiny_field();
    const auto bin_path = (dir / "d.bin").string();
    const auto csv_path = (dir / "d.csv").string();
    write_distance_field_binary(f, bin_path);
    write_distance_field_csv(f, csv_path);

    CHECK(std::filesystem::file_size(bin_path) == 4 * 1 * 3 * 5 * 8);
    std::ifstream bin(bin_path, std::ios::binary);
    CHECK(detail::get_f64(bin) == 0.0);  // node id
    CHECK(detail::get_f64(bin) == 0.0);  // array id
    CHECK(detail::get_f64(bin) == 0.0);  // candidate id
    CHECK(detail::get_f64(bin) == 10.0); // distance
    CHECK(detail::get_f64(bin) == 1.0);  // reachable

    std::ifstream csv(csv_path);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "node_id,array_id,candidate_id,distance_m,reachable");
    std::getline(csv, line);
    CHECK(line == "0,0,0,10,1");
    std::getline(csv, line);
    CHECK(line == "1,0,0,250,1");
    std::getline(csv, line);
    CHECK(line == "2,0,0,,0");

    write_distance_field_binary(f, (dir / "d2.bin").string());
    CHECK(slurp(dir / "d.bin") == slurp(dir / "d2.bin"));
}

TEST_CASE("channel dump aggregation over antennas and subcarriers") {
    // two antennas, two subcarriers; user 2 reachable from arrays 0 and 1
    const std::string text =
        "user_id,array_id,antenna_index,candidate_id,subcarrier_index,re,im\n"
        "2,0,0,0,0,1,1\n"
        "2,0,1,0,0,2,0\n"
        "2,0,0,0,1,0.5,0.5\n"
        "2,0,1,0,1,1,2\n"
        "2,1,0,0,0,1,0\n"
        "2,1,1,0,0,1,0\n"
        "2,1,0,0,1,1,0\n"
        "2,1,1,0,1,1,0\n";
    std::istringstream in(text);
    const auto records = parse_channel_dump(in);
    CHECK(records.size() == 8);

    std::array<std::vector<int>, 4> candidates = {{{0}, {0}, {0}, {0}}};
    const GainMatrix m = aggregate_channel_gains(records, candidates, 3);
    CHECK(m.provenance == "aggregated-coefficients");
    // (2 + 4 + 0.5 + 5) / 2
    CHECK(m.gain[0][0][2] == 5.75);
    CHECK(m.gain[1][0][2] == 2.0);
    CHECK(std::isnan(m.gain[2][0][2])); // absent pair stays unreachable
    CHECK(std::isnan(m.gain[0][0][0]));
}

TEST_CASE("channel dump header is optional") {
    std::istringstream with_header("user_id,array_id,antenna_index,candidate_id,subcarrier_index,re,im\n1,0,0,0,0,1,0\n");
    std::istringstream without("1,0,0,0,0,1,0\n");
    CHECK(parse_channel_dump(with_header).size() == 1);
    CHECK(parse_channel_dump(without).size() == 1);
}

TEST_CASE("channel dump rejects malformed and inconsistent input") {
    std::array<std::vector<int>, 4> candidates = {{{0}, {0}, {0}, {0}}};

    std::istringstream garbage("1,0,0,0,0,abc,0\n");
    CHECK_THROWS_WITH(parse_channel_dump(garbage), "channel dump: malformed line 1");

    std::istringstream short_line("1,0,0,0\n");
    CHECK_THROWS_AS(parse_channel_dump(short_line), std::invalid_argument);

    const auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return parse_channel_dump(in);
    };

    CHECK_THROWS_AS(aggregate_channel_gains(std::vector<ChannelRecord>{}, candidates, 3),
                    std::invalid_argument);
    // duplicate record
    CHECK_THROWS_AS(
        aggregate_channel_gains(parse("1,0,0,0,0,1,0\n1,0,0,0,0,2,0\n"), candidates, 3),
        std::invalid_argument);
    // inconsistent antenna sets across groups
    CHECK_THROWS_AS(aggregate_channel_gains(
                        parse("1,0,0,0,0,1,0\n1,0,1,0,0,1,0\n2,0,0,0,0,1,0\n"), candidates, 3),
                    std::invalid_argument);
    // inconsistent subcarrier sets across groups
    CHECK_THROWS_AS(aggregate_channel_gains(
                        parse("1,0,0,0,0,1,0\n1,0,0,0,1,1,0\n2,0,0,0,0,1,0\n"), candidates, 3),
                    std::invalid_argument);
    // array id out of range
    CHECK_THROWS_AS(aggregate_channel_gains(parse("1,4,0,0,0,1,0\n"), candidates, 3),
                    std::invalid_argument);
    // candidate id out of range
    CHECK_THROWS_AS(aggregate_channel_gains(parse("1,0,0,1,0,1,0\n"), candidates, 3),
                    std::invalid_argument);
    // user beyond the node count
    CHECK_THROWS_AS(aggregate_channel_gains(parse("9,0,0,0,0,1,0\n"), candidates, 3),
                    std::invalid_argument);
}
