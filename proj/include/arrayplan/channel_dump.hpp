#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gain_table.hpp"

namespace arrayplan {

// One complex coefficient for a (user, array, antenna, candidate, subcarrier)
// tuple, as read from a measurement dump.
struct ChannelRecord {
    int user_id = 0;
    int array_id = 0;
    int antenna_index = 0;
    int candidate_id = 0;
    int subcarrier_index = 0;
    double re = 0.0;
    double im = 0.0;
};

inline std::vector<ChannelRecord> parse_channel_dump(std::istream& in) {
    std::vector<ChannelRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.find("user_id") != std::string::npos) continue; // header
        std::istringstream ss(line);
        ChannelRecord r;
        char comma;
        ss >> r.user_id >> comma >> r.array_id >> comma >> r.antenna_index >> comma >>
            r.candidate_id >> comma >> r.subcarrier_index >> comma >> r.re >> comma >> r.im;
        if (!ss)
            throw std::invalid_argument("channel dump: malformed line " + std::to_string(lineno));
        out.push_back(r);
    }
    return out;
}

// Collapses per-antenna, per-subcarrier coefficients into one gain per
// (user, array, candidate): the squared magnitudes are summed over antennas
// and subcarriers and averaged over the subcarrier count. Tuples absent from
// the dump stay unreachable. The antenna count and the subcarrier set must
// be the same for every tuple the dump covers.
inline GainMatrix aggregate_channel_gains(const std::vector<ChannelRecord>& records,
                                          const std::array<std::vector<int>, 4>& candidates,
                                          int node_count) {
    struct Group {
        double power_sum = 0.0;
        std::set<int> antennas;
        std::set<int> subcarriers;
        std::set<std::pair<int, int>> seen;
    };
    std::map<std::tuple<int, int, int>, Group> groups;
    for (const ChannelRecord& r : records) {
        if (r.array_id < 0 || r.array_id >= 4)
            throw std::invalid_argument("channel dump: array_id out of range");
        if (r.user_id < 0 || r.user_id >= node_count)
            throw std::invalid_argument("channel dump: user_id out of range");
        if (r.candidate_id < 0 ||
            static_cast<std::size_t>(r.candidate_id) >= candidates[r.array_id].size())
            throw std::invalid_argument("channel dump: candidate_id out of range");
        Group& g = groups[{r.user_id, r.array_id, r.candidate_id}];
        if (!g.seen.insert({r.antenna_index, r.subcarrier_index}).second)
            throw std::invalid_argument("channel dump: duplicate coefficient record");
        g.antennas.insert(r.antenna_index);
        g.subcarriers.insert(r.subcarrier_index);
        g.power_sum += r.re * r.re + r.im * r.im;
    }
    if (groups.empty()) throw std::invalid_argument("channel dump: no records");

    const std::set<int>& antennas = groups.begin()->second.antennas;
    const std::set<int>& subcarriers = groups.begin()->second.subcarriers;
    for (const auto& [key, g] : groups) {
        if (g.antennas != antennas)
            throw std::invalid_argument("channel dump: inconsistent antenna set across tuples");
        if (g.subcarriers != subcarriers)
            throw std::invalid_argument("channel dump: inconsistent subcarrier set across tuples");
        if (g.seen.size() != antennas.size() * subcarriers.size())
            throw std::invalid_argument("channel dump: missing antenna/subcarrier coefficients");
    }

    GainMatrix m;
    m.node_count = node_count;
    m.candidates = candidates;
    m.provenance = "aggregated-coefficients";
    for (int t = 0; t < 4; ++t) {
        m.gain[t].assign(candidates[t].size(),
                         std::vector<double>(node_count, std::numeric_limits<double>::quiet_NaN()));
    }
    const double f_count = static_cast<double>(subcarriers.size());
    for (const auto& [key, g] : groups) {
        const auto [i, t, l] = key;
        m.gain[t][l][i] = g.power_sum / f_count;
    }
    return m;
}

inline GainMatrix aggregate_channel_gains(const std::string& csv_path,
                                          const std::array<std::vector<int>, 4>& candidates,
                                          int node_count) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open channel dump: " + csv_path);
    return aggregate_channel_gains(parse_channel_dump(in), candidates, node_count);
}

} // namespace arrayplan
