#include "sdiff/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "sdiff/random.hpp"

namespace sdiff {

namespace {

struct Moments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
        min = std::min(min, x);
        max = std::max(max, x);
    }

    // Pairwise combination of two partial results.
    void merge(const Moments& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(count + o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / total;
        count += o.count;
        min = std::min(min, o.min);
        max = std::max(max, o.max);
    }
};

}  // namespace

std::uint64_t geometric_attempts(double p, double u) {
    if (p >= 1.0) return 1;
    const double g = std::ceil(std::log(u) / std::log1p(-p));
    if (!(g >= 1.0)) return 1;
    return static_cast<std::uint64_t>(g);
}

SimulationSummary simulate_sequence(const DiffusionInstance& instance, std::span<const NodeId> seq,
                                    const SimulationOptions& options) {
    instance.require_valid();
    const SolveResult analytic = sequence_time(instance, seq);
    if (!analytic.feasible()) throw ValidationError("sequence has infinite expected time");
    if (options.trials == 0) throw ValidationError("trials must be at least 1");
    const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, options.trials);

    const InfluenceNetwork& net = instance.network;
    std::vector<double> probs;
    NodeSet active(net.size());
    active.insert(seq.front());
    for (std::size_t i = 1; i < seq.size(); ++i) {
        probs.push_back(detail::probability(active_influence(net, active, seq[i]), net.total_influence(seq[i]),
                                            instance.alpha, instance.beta));
        active.insert(seq[i]);
    }

    std::vector<Moments> parts(workers);
    auto run = [&](std::size_t w) {
        const std::size_t share = options.trials / workers + (w < options.trials % workers ? 1 : 0);
        Rng rng(derive_seed(options.rng_seed, w));
        Moments& m = parts[w];
        for (std::size_t t = 0; t < share; ++t) {
            std::uint64_t attempts = 0;
            for (double p : probs) attempts += geometric_attempts(p, rng.uniform_open_low());
            m.add(static_cast<double>(attempts));
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    Moments all;
    for (const Moments& m : parts) all.merge(m);

    SimulationSummary out;
    out.trials = all.count;
    out.mean = all.mean;
    out.std_error = all.count > 1 ? std::sqrt(all.m2 / static_cast<double>(all.count - 1) / static_cast<double>(all.count))
                                  : 0.0;
    out.min = all.min;
    out.max = all.max;
    out.analytic = analytic.total_time;
    return out;
}

}  // namespace sdiff
