#include "gridgas/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gridgas {

namespace {

std::uint64_t fmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

SplitMix64 SplitMix64::for_replica(std::uint64_t seed, std::uint64_t replica) {
    // hash the pair so replica streams do not overlap as shifted sequences
    return SplitMix64(fmix64(seed ^ fmix64(replica * 0x9e3779b97f4a7c15ull + 1)));
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    // modulo bias is far below any tolerance used here
    return next() % bound;
}

void metropolis_step(Configuration& config, const Graph& graph, double beta, SplitMix64& rng) {
    int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(graph.vertex_count)));
    if (config.occupied(site)) {
        if (rng.uniform() < std::exp(-beta)) config.set(site, false);
    } else if (can_add_particle(config, graph, site)) {
        config.set(site, true);
    }
}

namespace {

bool in_targets(const Configuration& c, const std::vector<Configuration>& targets) {
    for (const auto& t : targets)
        if (c == t) return true;
    return false;
}

// T ~ Geometric(p) on {1,2,...}
std::uint64_t geometric_steps(double p, SplitMix64& rng) {
    if (p >= 1.0) return 1;
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    double t = std::floor(std::log(u) / std::log1p(-p));
    if (t < 0) t = 0;
    if (t > 9.0e18) return static_cast<std::uint64_t>(9.0e18);
    return 1 + static_cast<std::uint64_t>(t);
}

HittingSample run_hardcore_replica(const Graph& graph, const Configuration& start,
                                   const std::vector<Configuration>& targets, double beta,
                                   std::uint64_t max_steps, bool rejection_free, SplitMix64 rng) {
    Configuration config = start;
    const double removal_p = std::exp(-beta);
    std::uint64_t steps = 0;
    if (!rejection_free) {
        while (steps < max_steps) {
            metropolis_step(config, graph, beta, rng);
            ++steps;
            if (in_targets(config, targets)) return {steps, false};
        }
        return {max_steps, true};
    }
    std::vector<int> occupied, addable;
    while (true) {
        occupied.clear();
        addable.clear();
        for (int v = 0; v < graph.vertex_count; ++v) {
            if (config.occupied(v))
                occupied.push_back(v);
            else if (can_add_particle(config, graph, v))
                addable.push_back(v);
        }
        double total = static_cast<double>(addable.size()) + removal_p * occupied.size();
        double p_escape = total / graph.vertex_count;
        if (p_escape <= 0.0) return {max_steps, true};  // frozen; cannot happen for hard-core
        std::uint64_t hold = geometric_steps(std::min(p_escape, 1.0), rng);
        if (max_steps - steps < hold) return {max_steps, true};
        steps += hold;
        double r = rng.uniform() * total;
        if (r < static_cast<double>(addable.size())) {
            config.set(addable[static_cast<std::size_t>(r)], true);
        } else {
            std::size_t idx = static_cast<std::size_t>((r - addable.size()) / removal_p);
            if (idx >= occupied.size()) idx = occupied.size() - 1;
            config.set(occupied[idx], false);
        }
        if (in_targets(config, targets)) return {steps, false};
    }
}

}  // namespace

std::vector<HittingSample> sample_hitting(const Graph& graph, const Configuration& start,
                                          const std::vector<Configuration>& targets,
                                          const SimConfig& sim) {
    if (sim.beta <= 0) throw validation_error("beta must be positive");
    if (sim.max_steps == 0) throw validation_error("max_steps must be positive");
    if (sim.replicas <= 0) throw validation_error("replicas must be positive");
    if (targets.empty()) throw validation_error("target set is empty");
    if (!is_independent(start, graph)) throw validation_error("start configuration is inadmissible");
    if (in_targets(start, targets)) throw validation_error("start configuration already in the target set");

    std::vector<HittingSample> out(sim.replicas);
    for (int r = 0; r < sim.replicas; ++r) {
        out[r] = run_hardcore_replica(graph, start, targets, sim.beta, sim.max_steps,
                                      sim.rejection_free, SplitMix64::for_replica(sim.seed, r));
    }
    bool all_capped = !out.empty();
    for (const auto& s : out) all_capped = all_capped && s.capped;
    if (all_capped)
        throw computation_error("every replica hit the step cap; raise max_steps or use rejection-free mode");
    return out;
}

std::uint64_t sample_hitting_landscape(const EnergyLandscape& land, int start,
                                       const std::vector<char>& target_mask, double beta,
                                       SplitMix64& rng, std::uint64_t max_steps, bool rejection_free,
                                       bool* capped, int* exit_state) {
    int state = start;
    std::uint64_t steps = 0;
    *capped = false;
    if (!rejection_free) {
        while (steps < max_steps) {
            double u = rng.uniform();
            double cum = 0;
            int proposal = -1;
            for (const auto* e = land.neighbors_begin(state); e != land.neighbors_end(state); ++e) {
                cum += e->q;
                if (u < cum) {
                    proposal = e->target;
                    break;
                }
            }
            ++steps;
            if (proposal >= 0) {
                Rational dh = land.energy(proposal) - land.energy(state);
                bool accept = true;
                if (Rational(0) < dh) accept = rng.uniform() < std::exp(-beta * dh.to_double());
                if (accept) state = proposal;
            }
            if (target_mask[state]) {
                if (exit_state) *exit_state = state;
                return steps;
            }
        }
        *capped = true;
        return max_steps;
    }
    std::vector<double> weights;
    while (true) {
        weights.clear();
        double total = 0;
        for (const auto* e = land.neighbors_begin(state); e != land.neighbors_end(state); ++e) {
            Rational dh = land.energy(e->target) - land.energy(state);
            double w = e->q;
            if (Rational(0) < dh) w *= std::exp(-beta * dh.to_double());
            weights.push_back(w);
            total += w;
        }
        if (total <= 0) {
            *capped = true;
            return max_steps;
        }
        std::uint64_t hold = geometric_steps(std::min(total, 1.0), rng);
        if (max_steps - steps < hold) {
            *capped = true;
            return max_steps;
        }
        steps += hold;
        double r = rng.uniform() * total;
        double cum = 0;
        int chosen = -1;
        int idx = 0;
        for (const auto* e = land.neighbors_begin(state); e != land.neighbors_end(state); ++e, ++idx) {
            cum += weights[idx];
            if (r < cum) {
                chosen = e->target;
                break;
            }
        }
        if (chosen < 0) chosen = (land.neighbors_end(state) - 1)->target;
        state = chosen;
        if (target_mask[state]) {
            if (exit_state) *exit_state = state;
            return steps;
        }
    }
}

double cycle_exit_frequency(const EnergyLandscape& land, const std::vector<int>& cycle_members,
                            int start, const std::vector<int>& principal, double beta, int n_exits,
                            std::uint64_t seed) {
    std::vector<char> outside(land.state_count(), 1);
    for (int s : cycle_members) outside[s] = 0;
    if (outside[start]) throw validation_error("exit start state must lie inside the cycle");
    std::vector<char> is_principal(land.state_count(), 0);
    for (int s : principal) is_principal[s] = 1;
    int good = 0;
    for (int trial = 0; trial < n_exits; ++trial) {
        SplitMix64 rng = SplitMix64::for_replica(seed, trial);
        bool capped = false;
        int exit_state = -1;
        sample_hitting_landscape(land, start, outside, beta, rng,
                                 std::numeric_limits<std::uint64_t>::max(), true, &capped, &exit_state);
        if (capped) throw computation_error("cycle exit sampling hit the step cap");
        if (is_principal[exit_state]) ++good;
    }
    return static_cast<double>(good) / n_exits;
}

SlopeFit estimate_exponent(const std::vector<std::pair<double, double>>& beta_mean,
                           const std::vector<bool>& capped, bool allow_capped) {
    if (!capped.empty() && !allow_capped) {
        for (bool c : capped)
            if (c) throw validation_error("capped samples poison the slope estimate; pass allow_capped to override");
    }
    if (beta_mean.size() < 2) throw validation_error("slope estimation needs at least two beta points");
    double b0 = beta_mean[0].first;
    bool distinct = false;
    for (const auto& [b, m] : beta_mean) {
        if (m <= 0) throw validation_error("slope estimation needs positive means");
        if (b != b0) distinct = true;
    }
    if (!distinct) throw validation_error("slope estimation needs at least two distinct beta values");

    const int n = static_cast<int>(beta_mean.size());
    double sx = 0, sy = 0;
    for (const auto& [b, m] : beta_mean) {
        sx += b;
        sy += std::log(m);
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [b, m] : beta_mean) {
        sxx += (b - mx) * (b - mx);
        sxy += (b - mx) * (std::log(m) - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double ss = 0;
        for (const auto& [b, m] : beta_mean) {
            double r = std::log(m) - (fit.intercept + fit.slope * b);
            ss += r * r;
        }
        fit.stderr_slope = std::sqrt(ss / (n - 2) / sxx);
    }
    return fit;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left) {
    std::sort(samples.begin(), samples.end());
    const int n = static_cast<int>(samples.size());
    double d = 0;
    int i = 0;
    while (i < n) {
        int j = i;
        while (j < n && samples[j] == samples[i]) ++j;
        double f = cdf(samples[i]);
        double f_left = cdf_left ? cdf_left(samples[i]) : f;
        d = std::max(d, std::abs(f - static_cast<double>(j) / n));
        d = std::max(d, std::abs(f_left - static_cast<double>(i) / n));
        i = j;
    }
    return d;
}

double ks_distance_above(std::vector<double> samples, const std::function<double(double)>& cdf,
                         double cutoff) {
    std::sort(samples.begin(), samples.end());
    const int n = static_cast<int>(samples.size());
    int i = 0;
    while (i < n && samples[i] < cutoff) ++i;
    double d = std::abs(cdf(cutoff) - static_cast<double>(i) / n);
    while (i < n) {
        int j = i;
        while (j < n && samples[j] == samples[i]) ++j;
        double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(j) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        i = j;
    }
    return d;
}

KsResult ks_exp1(std::vector<double> scaled_samples, double alpha) {
    if (scaled_samples.size() < 100)
        throw validation_error("KS test needs at least 100 uncapped samples");
    KsResult res;
    res.n = static_cast<int>(scaled_samples.size());
    res.alpha = alpha;
    res.statistic = ks_distance(std::move(scaled_samples),
                                [](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-t); });
    res.critical = std::sqrt(-0.5 * std::log(alpha / 2)) / std::sqrt(static_cast<double>(res.n));
    res.pass = res.statistic < res.critical;
    return res;
}

std::string hitting_samples_csv(const std::vector<HittingSample>& samples) {
    std::ostringstream out;
    out << "replica,steps,capped\n";
    for (std::size_t i = 0; i < samples.size(); ++i)
        out << i << ',' << samples[i].steps << ',' << (samples[i].capped ? 1 : 0) << '\n';
    return out.str();
}

}  // namespace gridgas
