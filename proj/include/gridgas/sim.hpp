#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gridgas/bitconfig.hpp"
#include "gridgas/graph.hpp"
#include "gridgas/landscape.hpp"

namespace gridgas {

// Splittable counter-based generator: replica streams are independent and a
// run is reproducible from (seed, replica).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static SplitMix64 for_replica(std::uint64_t seed, std::uint64_t replica);

    std::uint64_t next();
    double uniform();               // [0, 1)
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

struct SimConfig {
    double beta = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 1'000'000'000;
    int replicas = 1;
    bool rejection_free = false;
};

struct HittingSample {
    std::uint64_t steps = 0;
    bool capped = false;
};

// One Metropolis update of the hard-core dynamics: pick a site uniformly at
// random; remove its particle with probability e^{-beta}, or create a
// particle with probability 1 when the site and all neighbors are vacant.
void metropolis_step(Configuration& config, const Graph& graph, double beta, SplitMix64& rng);

// First hitting times of `targets` from `start`, one sample per replica.
// The rejection-free mode resamples the geometric holding time in each state
// and advances directly to the next accepted move; step counts follow the
// same law as the plain chain.
std::vector<HittingSample> sample_hitting(const Graph& graph, const Configuration& start,
                                          const std::vector<Configuration>& targets,
                                          const SimConfig& sim);

// Metropolis dynamics on a generic energy landscape (states are landscape
// indices, proposals follow q).
std::uint64_t sample_hitting_landscape(const EnergyLandscape& land, int start,
                                       const std::vector<char>& target_mask, double beta,
                                       SplitMix64& rng, std::uint64_t max_steps, bool rejection_free,
                                       bool* capped, int* exit_state = nullptr);

// Runs the landscape chain from `start` until it leaves `cycle_members` and
// reports the fraction of exits that landed in `principal`. Used to observe
// the low-temperature concentration of cycle exits.
double cycle_exit_frequency(const EnergyLandscape& land, const std::vector<int>& cycle_members,
                            int start, const std::vector<int>& principal, double beta, int n_exits,
                            std::uint64_t seed);

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double stderr_slope = 0;
};

// Least-squares slope of log(mean) against beta. Capped samples bias the
// means, so points carrying them are rejected unless allow_capped is set.
SlopeFit estimate_exponent(const std::vector<std::pair<double, double>>& beta_mean,
                           const std::vector<bool>& capped = {}, bool allow_capped = false);

struct KsResult {
    double statistic = 0;
    int n = 0;
    double alpha = 0.01;
    double critical = 0;
    bool pass = false;
};

// One-sample Kolmogorov-Smirnov test of mean-scaled samples against the
// unit-mean exponential law, with the asymptotic critical value at level
// alpha. Requires at least 100 uncapped samples.
KsResult ks_exp1(std::vector<double> scaled_samples, double alpha = 0.01);

// Supremum distance between the empirical CDF of the samples and an
// arbitrary CDF. For laws with atoms, pass the left limit of the CDF as
// well; tied samples are then compared against both one-sided values.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left = {});

// Supremum distance restricted to t >= cutoff. Mass below the cutoff still
// enters the empirical CDF, so a law with an atom at zero can be compared
// against finite-beta samples whose atom is smeared onto small positives.
double ks_distance_above(std::vector<double> samples, const std::function<double(double)>& cdf,
                         double cutoff);

// CSV dump: replica,steps,capped
std::string hitting_samples_csv(const std::vector<HittingSample>& samples);

}  // namespace gridgas
