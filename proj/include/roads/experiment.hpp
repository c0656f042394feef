#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "roads/rng.hpp"

namespace roads {

inline constexpr const char* kToolVersion = "roadsim 0.1.0";

// Seeded, replicated Monte Carlo summary with an optional analytic oracle.
struct ExperimentResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::optional<double> oracle;
    std::optional<double> z_score;
    std::size_t censored_count = 0;
    double runtime_seconds = 0.0;
};

unsigned resolve_workers(unsigned requested);

// Runs fn(replica_index, rng) for every replica with an independently
// derived RNG stream. fn is copied once per worker thread, so mutable
// functor state acts as per-thread scratch. Results land in replica order,
// so aggregation never depends on the worker count.
template <class T, class F>
std::vector<T> run_replicas(std::size_t reps, std::uint64_t master_seed,
                            unsigned workers, F fn) {
    std::vector<T> results(reps);
    const unsigned w = resolve_workers(workers);
    if (w <= 1 || reps < 2 * w) {
        F local = fn;
        for (std::size_t i = 0; i < reps; ++i) {
            Rng rng = Rng::for_replica(master_seed, i);
            results[i] = local(i, rng);
        }
        return results;
    }
    std::vector<std::thread> threads;
    threads.reserve(w);
    const std::size_t chunk = (reps + w - 1) / w;
    for (unsigned t = 0; t < w; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(reps, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&results, master_seed, begin, end, fn]() mutable {
            for (std::size_t i = begin; i < end; ++i) {
                Rng rng = Rng::for_replica(master_seed, i);
                results[i] = fn(i, rng);
            }
        });
    }
    for (auto& th : threads) th.join();
    return results;
}

// Minimal table sink: fixed header, stringified rows, CSV or JSON lines.
class TableWriter {
public:
    enum class Format { kCsv, kJsonl };

    TableWriter(std::vector<std::string> columns, Format format);

    void add_row(std::vector<std::string> values);
    std::string str() const;
    // Throws std::runtime_error on I/O failure.
    void write_file(const std::string& path) const;

    static Format parse_format(const std::string& name);

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    Format format_;
};

// Shortest round-trippable decimal representation of a double.
std::string format_double(double v);

}  // namespace roads
