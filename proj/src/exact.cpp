#include "gridgas/exact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridgas/errors.hpp"

namespace gridgas {

TransitionMatrix build_transition_matrix(const EnergyLandscape& land, double beta) {
    const int n = land.state_count();
    TransitionMatrix tm;
    tm.beta = beta;
    tm.P = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        double row = 0;
        for (const auto* e = land.neighbors_begin(x); e != land.neighbors_end(x); ++e) {
            Rational dh = land.energy(e->target) - land.energy(x);
            double p = e->q;
            if (Rational(0) < dh) p *= std::exp(-beta * dh.to_double());
            tm.P(x, e->target) += p;
            row += p;
        }
        tm.P(x, x) = 1.0 - row;
        if (tm.P(x, x) < -1e-12) throw computation_error("transition matrix row exceeds 1");
        if (tm.P(x, x) < 0) tm.P(x, x) = 0;
    }
    return tm;
}

Eigen::VectorXd gibbs_distribution(const EnergyLandscape& land, double beta) {
    const int n = land.state_count();
    Rational hmin = land.energy(0);
    for (int x = 1; x < n; ++x) hmin = rational_min(hmin, land.energy(x));
    Eigen::VectorXd mu(n);
    for (int x = 0; x < n; ++x) mu(x) = std::exp(-beta * (land.energy(x) - hmin).to_double());
    mu /= mu.sum();
    return mu;
}

double reversibility_residual(const TransitionMatrix& tm, const Eigen::VectorXd& mu) {
    double worst = 0;
    const int n = static_cast<int>(tm.P.rows());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            worst = std::max(worst, std::abs(mu(x) * tm.P(x, y) - mu(y) * tm.P(y, x)));
    return worst;
}

Eigen::VectorXd mean_hitting_exact(const EnergyLandscape& land, const std::vector<int>& targets,
                                   double beta) {
    const int n = land.state_count();
    if (targets.empty()) throw validation_error("mean hitting time needs a nonempty target set");
    std::vector<char> in_a(n, 0);
    for (int t : targets) in_a[t] = 1;
    std::vector<int> rest;
    for (int x = 0; x < n; ++x)
        if (!in_a[x]) rest.push_back(x);
    TransitionMatrix tm = build_transition_matrix(land, beta);

    // State-reduction (GTH-style) elimination of h = 1 + Q h. Every update
    // adds non-negative numbers and the diagonal denominator is kept as an
    // explicit positive sum, so the result stays accurate even when the
    // system's condition number reaches e^{beta Gamma} and a plain LU solve
    // would lose every digit.
    const int m = static_cast<int>(rest.size());
    Eigen::MatrixXd Q(m, m);
    Eigen::VectorXd absorb = Eigen::VectorXd::Zero(m);  // mass into the target set
    Eigen::VectorXd c = Eigen::VectorXd::Ones(m);       // accumulated visit costs
    for (int i = 0; i < m; ++i) {
        double a = 0;
        for (int t : targets) a += tm.P(rest[i], t);
        absorb(i) = a;
        for (int j = 0; j < m; ++j) Q(i, j) = (i == j) ? 0.0 : tm.P(rest[i], rest[j]);
    }
    std::vector<double> denom(m, 0.0);
    for (int z = m - 1; z >= 0; --z) {
        double d = absorb(z);
        for (int j = 0; j < z; ++j) d += Q(z, j);
        denom[z] = d;
        if (!(d > 0)) throw computation_error("absorbed-chain elimination hit a zero denominator");
        for (int i = 0; i < z; ++i) {
            double w = Q(i, z) / d;
            if (w == 0) continue;
            c(i) += w * c(z);
            absorb(i) += w * absorb(z);
            for (int j = 0; j < z; ++j)
                if (j != i) Q(i, j) += w * Q(z, j);
        }
    }
    Eigen::VectorXd h = Eigen::VectorXd::Zero(m);
    for (int z = 0; z < m; ++z) {
        double acc = c(z);
        for (int j = 0; j < z; ++j) acc += Q(z, j) * h(j);
        h(z) = acc / denom[z];
        if (!std::isfinite(h(z)) || h(z) <= 0)
            throw computation_error("absorbed-chain elimination produced a non-positive mean");
    }

    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) out(rest[i]) = h(i);
    // target states report 0 to keep the vector unambiguous
    return out;
}

double mean_hitting_exact(const EnergyLandscape& land, int start, const std::vector<int>& targets,
                          double beta) {
    for (int t : targets)
        if (t == start) throw validation_error("mean hitting time requires the start outside the target set");
    return mean_hitting_exact(land, targets, beta)(start);
}

namespace {

double tv_from_every_start(const Eigen::MatrixXd& Pn, const Eigen::VectorXd& mu) {
    double worst = 0;
    for (int x = 0; x < Pn.rows(); ++x) {
        double tv = 0.5 * (Pn.row(x).transpose() - mu).cwiseAbs().sum();
        worst = std::max(worst, tv);
    }
    return worst;
}

Eigen::MatrixXd renormalize_rows(Eigen::MatrixXd M) {
    for (int x = 0; x < M.rows(); ++x) {
        for (int y = 0; y < M.cols(); ++y)
            if (M(x, y) < 0) M(x, y) = 0;
        double s = M.row(x).sum();
        if (s > 0) M.row(x) /= s;
    }
    return M;
}

// P^n from the cached ladder of squarings
Eigen::MatrixXd matrix_power(const std::vector<Eigen::MatrixXd>& ladder, std::uint64_t n) {
    Eigen::MatrixXd result;
    bool have = false;
    for (std::size_t bit = 0; bit < ladder.size(); ++bit) {
        if ((n >> bit) & 1) {
            result = have ? Eigen::MatrixXd(result * ladder[bit]) : ladder[bit];
            have = true;
        }
    }
    if (!have) result = Eigen::MatrixXd::Identity(ladder[0].rows(), ladder[0].cols());
    return renormalize_rows(result);
}

}  // namespace

MixingResult tv_mixing_time(const EnergyLandscape& land, double beta, double eps, std::uint64_t cap) {
    if (eps <= 0 || eps >= 1) throw validation_error("mixing time needs 0 < eps < 1");
    const double guard = 1e-9;  // documented guard band on the eps comparison
    TransitionMatrix tm = build_transition_matrix(land, beta);
    Eigen::VectorXd mu = gibbs_distribution(land, beta);

    std::vector<Eigen::MatrixXd> ladder{tm.P};
    auto tv_at = [&](std::uint64_t n) {
        while ((std::uint64_t{1} << (ladder.size() - 1)) < n && ladder.size() < 63)
            ladder.push_back(renormalize_rows(ladder.back() * ladder.back()));
        return tv_from_every_start(matrix_power(ladder, n), mu);
    };

    if (tv_at(1) <= eps + guard) return {1, false};
    std::uint64_t hi = 2;
    while (hi < cap && tv_at(hi) > eps + guard) hi *= 2;
    if (hi >= cap && tv_at(std::min(hi, cap)) > eps + guard) return {cap, true};
    std::uint64_t lo = hi / 2;  // tv(lo) > eps, tv(hi) <= eps
    while (lo + 1 < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (tv_at(mid) > eps + guard)
            lo = mid;
        else
            hi = mid;
    }
    return {hi, false};
}

std::string to_coordinate_text(const TransitionMatrix& tm) {
    std::ostringstream out;
    out.precision(17);
    const int n = static_cast<int>(tm.P.rows());
    out << "# beta " << tm.beta << ", " << n << " states\n";
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (tm.P(x, y) != 0) out << x << ' ' << y << ' ' << tm.P(x, y) << '\n';
    return out.str();
}

double spectral_gap(const EnergyLandscape& land, double beta) {
    TransitionMatrix tm = build_transition_matrix(land, beta);
    Eigen::VectorXd mu = gibbs_distribution(land, beta);
    const int n = land.state_count();
    Eigen::VectorXd sq = mu.cwiseSqrt();
    Eigen::MatrixXd S(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) S(x, y) = sq(x) * tm.P(x, y) / sq(y);
    S = 0.5 * (S + S.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    if (solver.info() != Eigen::Success) throw computation_error("eigen-solver failed to converge");
    const auto& ev = solver.eigenvalues();  // ascending
    double a2 = ev(n - 2);
    return 1.0 - a2;
}

}  // namespace gridgas
