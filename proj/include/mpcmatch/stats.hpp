#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpcmatch/graph.hpp"
#include "mpcmatch/phase_emulator.hpp"

namespace mpcmatch {

// empirical machine-assignment frequencies for a sampled set of vertices,
// conditioned on the vertex surviving the phase, across repeated runs
struct UniformityStats {
    std::size_t machines = 0;
    std::size_t runs = 0;
    std::vector<Vertex> sampled;                 // vertices the estimate covers
    std::vector<std::size_t> samples;            // per sampled vertex: #runs it survived in
    std::vector<std::vector<double>> frequency;  // [sampled index][machine], rows sum to 1
                                                 // when samples > 0
    double epsilon_hat = 0.0;                    // max |machines * frequency - 1| over all
                                                 // cells with samples > 0
    double load_min = 0.0;                       // machine loads pooled over runs
    double load_max = 0.0;
    double load_mean = 0.0;

    // one row per sampled vertex and machine
    std::string frequency_csv() const {
        std::ostringstream os;
        os << "vertex,machine,samples,frequency\n";
        for (std::size_t i = 0; i < sampled.size(); ++i) {
            for (std::size_t j = 0; j < machines; ++j) {
                os << sampled[i] << "," << j << "," << samples[i] << ","
                   << frequency[i][j] << "\n";
            }
        }
        return os.str();
    }
};

inline constexpr std::size_t kUniformitySampleLimit = 64;

// estimates how far the machine assignment is from uniform, using the lowest
// sample_limit vertex ids that were assigned to a machine in at least one run
inline UniformityStats uniformity_stats(const std::vector<EmulatePhaseOutput>& runs,
                                        std::size_t sample_limit = kUniformitySampleLimit) {
    if (runs.size() < 2) {
        throw std::invalid_argument("uniformity_stats: need at least 2 runs");
    }
    const std::size_t m = runs.front().machine_sizes.size();
    const std::size_t n = runs.front().assignment.size();
    for (const auto& r : runs) {
        if (r.machine_sizes.size() != m || r.assignment.size() != n) {
            throw std::invalid_argument("uniformity_stats: runs disagree on machine count or universe");
        }
    }
    UniformityStats st;
    st.machines = m;
    st.runs = runs.size();
    for (Vertex v = 0; v < n && st.sampled.size() < sample_limit; ++v) {
        bool seen = false;
        for (const auto& r : runs) {
            if (r.assignment[v] != kNoMachine) { seen = true; break; }
        }
        if (seen) st.sampled.push_back(v);
    }
    st.samples.assign(st.sampled.size(), 0);
    st.frequency.assign(st.sampled.size(), std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < st.sampled.size(); ++i) {
        const Vertex v = st.sampled[i];
        for (const auto& r : runs) {
            if (!r.survivors.contains(v)) continue;
            const std::uint32_t machine = r.assignment[v];
            if (machine == kNoMachine) continue;
            st.frequency[i][machine] += 1.0;
            st.samples[i] += 1;
        }
        if (st.samples[i] > 0) {
            for (auto& f : st.frequency[i]) f /= static_cast<double>(st.samples[i]);
        }
    }
    st.epsilon_hat = 0.0;
    for (std::size_t i = 0; i < st.sampled.size(); ++i) {
        if (st.samples[i] == 0) continue;
        for (std::size_t j = 0; j < m; ++j) {
            const double dev = std::abs(static_cast<double>(m) * st.frequency[i][j] - 1.0);
            st.epsilon_hat = std::max(st.epsilon_hat, dev);
        }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double sum = 0.0;
    std::size_t cells = 0;
    for (const auto& r : runs) {
        for (std::size_t sz : r.machine_sizes) {
            const double x = static_cast<double>(sz);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            sum += x;
            ++cells;
        }
    }
    st.load_min = cells ? lo : 0.0;
    st.load_max = hi;
    st.load_mean = cells ? sum / static_cast<double>(cells) : 0.0;
    return st;
}

}  // namespace mpcmatch
