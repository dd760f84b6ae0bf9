#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ruloff/errors.hpp"

namespace ruloff {

struct PsoConfig {
    int swarm_size = 300;
    double inertia = 0.9; // velocity retention e in [0,1]
    double c1 = 2.0, c2 = 2.0;
    int max_iter = 2000;
    double target = 0.1;
    std::uint64_t seed = 0;
    std::vector<double> lo, hi; // per-dimension box

    size_t dims() const { return lo.size(); }
    void validate() const {
        if (swarm_size < 2) throw geometry_error("swarm size must be at least 2");
        if (lo.size() != hi.size() || lo.empty())
            throw geometry_error("optimizer bounds malformed");
        for (size_t d = 0; d < lo.size(); ++d)
            if (!(lo[d] < hi[d])) throw geometry_error("optimizer bounds require lo < hi");
    }
};

using FitnessFn = std::function<double(const std::vector<double>&)>;

struct SwarmState {
    std::vector<std::vector<double>> pos, vel, pbest;
    std::vector<double> pbest_val;
    std::vector<double> gbest;
    double gbest_val = 0;
    int iter = 0;
    std::vector<double> history; // best value after init and after each step
    std::mt19937_64 rng;
};

namespace detail {
// uniform double in [0,1) from the top 53 bits; fixed mapping keeps runs
// reproducible across standard libraries
inline double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double checked_fitness(const FitnessFn& f, const std::vector<double>& x, size_t particle) {
    double v = f(x);
    if (!std::isfinite(v))
        throw geometry_error("non-finite fitness for particle " + std::to_string(particle));
    return v;
}
} // namespace detail

inline SwarmState pso_init(const PsoConfig& cfg, const FitnessFn& fitness) {
    cfg.validate();
    const size_t n = static_cast<size_t>(cfg.swarm_size), dims = cfg.dims();
    SwarmState st;
    st.rng.seed(cfg.seed);
    st.pos.assign(n, std::vector<double>(dims));
    st.vel.assign(n, std::vector<double>(dims));
    for (auto& p : st.pos)
        for (size_t d = 0; d < dims; ++d)
            p[d] = cfg.lo[d] + detail::u01(st.rng) * (cfg.hi[d] - cfg.lo[d]);
    for (auto& v : st.vel)
        for (size_t d = 0; d < dims; ++d)
            v[d] = (detail::u01(st.rng) * 2.0 - 1.0) * 0.1 * (cfg.hi[d] - cfg.lo[d]);
    st.pbest = st.pos;
    st.pbest_val.resize(n);
    for (size_t i = 0; i < n; ++i) st.pbest_val[i] = detail::checked_fitness(fitness, st.pos[i], i);
    size_t gi = 0;
    for (size_t i = 1; i < n; ++i)
        if (st.pbest_val[i] < st.pbest_val[gi]) gi = i;
    st.gbest = st.pbest[gi];
    st.gbest_val = st.pbest_val[gi];
    st.history.push_back(st.gbest_val);
    return st;
}

// One synchronous swarm update: every particle accelerates toward its personal
// best and the previous iteration's global best, positions are clamped to the
// box (zeroing the violating velocity component), then bests refresh.
inline void pso_step(SwarmState& st, const PsoConfig& cfg, const FitnessFn& fitness) {
    const size_t n = st.pos.size(), dims = cfg.dims();
    const std::vector<double> g = st.gbest;
    for (size_t i = 0; i < n; ++i) {
        const double r1 = detail::u01(st.rng), r2 = detail::u01(st.rng);
        for (size_t d = 0; d < dims; ++d) {
            double& v = st.vel[i][d];
            double& x = st.pos[i][d];
            v = cfg.inertia * v + cfg.c1 * r1 * (st.pbest[i][d] - x) +
                cfg.c2 * r2 * (g[d] - x);
            x += v;
            if (x < cfg.lo[d]) {
                x = cfg.lo[d];
                v = 0;
            } else if (x > cfg.hi[d]) {
                x = cfg.hi[d];
                v = 0;
            }
        }
        double val = detail::checked_fitness(fitness, st.pos[i], i);
        if (val < st.pbest_val[i]) {
            st.pbest_val[i] = val;
            st.pbest[i] = st.pos[i];
        }
    }
    for (size_t i = 0; i < n; ++i)
        if (st.pbest_val[i] < st.gbest_val) {
            st.gbest_val = st.pbest_val[i];
            st.gbest = st.pbest[i];
        }
    ++st.iter;
    st.history.push_back(st.gbest_val);
}

struct PsoResult {
    std::vector<double> best;
    double value = 0;
    int iterations = 0;
    std::vector<double> history;
    bool converged = false;
};

inline PsoResult pso_minimize(const FitnessFn& fitness, const PsoConfig& cfg) {
    SwarmState st = pso_init(cfg, fitness);
    while (st.gbest_val > cfg.target && st.iter < cfg.max_iter) pso_step(st, cfg, fitness);
    return {st.gbest, st.gbest_val, st.iter, st.history, st.gbest_val <= cfg.target};
}

} // namespace ruloff
