#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gridgas/landscape.hpp"

namespace gridgas {

struct TransitionMatrix {
    Eigen::MatrixXd P;  // row-stochastic
    double beta = 0;
};

// Metropolis transition matrix at fixed beta: off-diagonal entries
// q(x,y) e^{-beta [H(y)-H(x)]^+}, residual on the diagonal.
TransitionMatrix build_transition_matrix(const EnergyLandscape& land, double beta);

// Gibbs stationary law mu_beta(x) ∝ e^{-beta H(x)}.
Eigen::VectorXd gibbs_distribution(const EnergyLandscape& land, double beta);

// max_{x,y} |mu(x) P(x,y) - mu(y) P(y,x)|
double reversibility_residual(const TransitionMatrix& tm, const Eigen::VectorXd& mu);

// Mean hitting time of `targets` from every state, by the absorbed-chain
// dense linear solve h = 1 + Q h on the complement.
Eigen::VectorXd mean_hitting_exact(const EnergyLandscape& land, const std::vector<int>& targets,
                                   double beta);

double mean_hitting_exact(const EnergyLandscape& land, int start, const std::vector<int>& targets,
                          double beta);

struct MixingResult {
    std::uint64_t steps = 0;
    bool capped = false;  // steps is then a lower bound
};

// Smallest n with max_x ||P^n(x,.) - mu||_TV <= eps, located by doubling and
// binary search over cached powers-of-two of P. A 1e-9 guard band is applied
// to the eps comparison to keep the answer stable under roundoff.
MixingResult tv_mixing_time(const EnergyLandscape& land, double beta, double eps,
                            std::uint64_t cap = std::uint64_t{1} << 40);

// 1 - a2 where a2 is the second-largest eigenvalue of P_beta, computed on the
// similar symmetric matrix D^{1/2} P D^{-1/2}.
double spectral_gap(const EnergyLandscape& land, double beta);

// "row col value" lines, nonzero entries only.
std::string to_coordinate_text(const TransitionMatrix& tm);

}  // namespace gridgas
