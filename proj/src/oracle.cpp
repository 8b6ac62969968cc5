#include "qpr/oracle.hpp"

#include "qpr/angles.hpp"
#include "qpr/bases.hpp"
#include "qpr/errors.hpp"
#include "qpr/reconstruct_povm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

namespace qpr {

namespace {

struct ResidualEvaluator {
    Eigen::MatrixXd weights;    // basis row entry times site amplitude, one column per support site
    Eigen::VectorXd target;     // constructed probabilities
    Eigen::VectorXd amplitudes; // sqrt of the position probabilities
    std::vector<int> support;
    mutable std::vector<std::complex<double>> phasors;

    void load(const std::vector<double>& thetas) const {
        phasors.assign(support.size(), std::complex<double>(1.0, 0.0));
        for (size_t l = 1; l < support.size(); ++l) {
            phasors[l] = std::polar(1.0, thetas[l - 1]);
        }
    }

    double deviation(int m) const {
        std::complex<double> coeff = 0.0;
        for (size_t l = 0; l < phasors.size(); ++l) {
            coeff += weights(m, static_cast<int>(l)) * phasors[l];
        }
        return std::norm(coeff) - target(m);
    }

    // Mean squared deviation across the constructed outcomes; smooth in the
    // phases, zero exactly where the largest deviation is zero.
    double smooth(const std::vector<double>& thetas) const {
        load(thetas);
        double acc = 0.0;
        for (int m = 0; m < weights.rows(); ++m) {
            double dev = deviation(m);
            acc += dev * dev;
        }
        return acc / static_cast<double>(weights.rows());
    }

    double largest(const std::vector<double>& thetas) const {
        load(thetas);
        double worst = 0.0;
        for (int m = 0; m < weights.rows(); ++m) {
            worst = std::max(worst, std::abs(deviation(m)));
        }
        return worst;
    }
};

// Coordinate descent on the smooth residual taking the single best stencil
// move per sweep. The caller passes an initial step well below the spacing
// of its start points so the walk cannot hop across the residual barrier
// between two nearby minima and collapse them into one.
std::vector<double> polish(const ResidualEvaluator& eval, std::vector<double> thetas,
                           double initial_step) {
    double best = eval.smooth(thetas);
    double step = initial_step;
    int budget = 50000;
    while (step > 1e-10 && budget > 0) {
        size_t move_axis = thetas.size();
        double move_shift = 0.0;
        double move_value = best;
        for (size_t axis = 0; axis < thetas.size(); ++axis) {
            double saved = thetas[axis];
            for (double dir : {1.0, -1.0}) {
                thetas[axis] = wrap_angle(saved + dir * step);
                double value = eval.smooth(thetas);
                --budget;
                if (value < move_value) {
                    move_value = value;
                    move_axis = axis;
                    move_shift = dir * step;
                }
            }
            thetas[axis] = saved;
        }
        if (move_axis < thetas.size()) {
            thetas[move_axis] = wrap_angle(thetas[move_axis] + move_shift);
            best = move_value;
        } else {
            step *= 0.5;
        }
    }
    return thetas;
}

double chebyshev_angle_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, angle_distance(a[i], b[i]));
    }
    return worst;
}

} // namespace

BruteForceResult brute_force_phase_search(const ProbabilityDistribution& position,
                                          const ProbabilityDistribution& constructed,
                                          int grid_steps, double tol, double support_tol) {
    int d = position.size();
    if (constructed.size() != d) {
        throw DimensionMismatchError("brute_force_phase_search: distribution sizes differ");
    }
    if (grid_steps < 2) {
        throw InvalidDistributionError("brute_force_phase_search: need at least 2 grid steps");
    }

    ResidualEvaluator eval;
    eval.target = constructed.probs;
    eval.amplitudes = position.probs.cwiseSqrt();
    for (int k = 0; k < d; ++k) {
        if (eval.amplitudes(k) > support_tol) eval.support.push_back(k);
    }
    if (eval.support.empty()) throw EmptySupportError{};

    int sites = static_cast<int>(eval.support.size());
    Eigen::MatrixXd rows = constructed_basis(d).vectors.real();
    eval.weights.resize(d, sites);
    for (int m = 0; m < d; ++m) {
        for (int l = 0; l < sites; ++l) {
            eval.weights(m, l) = rows(m, eval.support[l]) * eval.amplitudes(eval.support[l]);
        }
    }

    int axes = sites - 1;
    double cells = std::pow(static_cast<double>(grid_steps), axes);
    if (cells > kBruteForceSearchCap) {
        throw SearchSpaceCapError("grid of " + std::to_string(cells) +
                                  " cells exceeds the search cap");
    }

    double h = kTwoPi / grid_steps;

    // Every exact root sits within half a cell of some grid corner, and
    // outcome m drifts by at most 2 R_m |w_{m,l}| per radian of phase l,
    // where R_m bounds |coeff_m|. That corner therefore keeps
    // |dev_m| <= h R_m T_m with T_m summing the movable columns. Gating
    // each outcome by its own bound keeps only corners that are consistent
    // with a nearby root for every outcome at once.
    Eigen::VectorXd row_gate(d);
    for (int m = 0; m < d; ++m) {
        double reach = 0.0;
        double movable = 0.0;
        for (int l = 0; l < sites; ++l) {
            double w = std::abs(eval.weights(m, l));
            reach += w;
            if (l > 0) movable += w;
        }
        row_gate(m) = h * reach * movable + tol;
    }

    std::vector<std::complex<double>> table(grid_steps);
    for (int k = 0; k < grid_steps; ++k) table[k] = std::polar(1.0, k * h);

    struct Seed {
        std::vector<double> thetas;
        double ratio;
    };
    std::vector<Seed> seeds;
    std::vector<int> index(axes, 0);
    long long total = static_cast<long long>(cells);
    eval.phasors.assign(sites, std::complex<double>(1.0, 0.0));
    for (long long cell = 0; cell < total; ++cell) {
        for (int axis = 0; axis < axes; ++axis) eval.phasors[axis + 1] = table[index[axis]];
        bool pass = true;
        for (int m = 0; m < d && pass; ++m) {
            pass = std::abs(eval.deviation(m)) <= row_gate(m);
        }
        if (pass) {
            Seed seed;
            seed.thetas.resize(axes);
            double ratio = 0.0;
            for (int axis = 0; axis < axes; ++axis) seed.thetas[axis] = index[axis] * h;
            for (int m = 0; m < d; ++m) {
                ratio = std::max(ratio, std::abs(eval.deviation(m)) / row_gate(m));
            }
            seed.ratio = ratio;
            seeds.push_back(std::move(seed));
        }
        for (int axis = 0; axis < axes; ++axis) {
            if (++index[axis] < grid_steps) break;
            index[axis] = 0;
        }
    }
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        return a.thetas < b.thetas;
    });

    std::vector<std::vector<double>> centers;
    std::vector<double> residuals;

    // Descent can stall inside a narrow near-flat valley, leaving low-residual
    // points that are farther than the merge radius from the minimum yet
    // belong to the same basin. Two points count as distinct roots only when
    // the residual rises clearly above both somewhere between them.
    std::vector<double> waypoint(axes);
    auto barrier_between = [&](const std::vector<double>& a, const std::vector<double>& b,
                               double floor_res) {
        double rise = std::max(4.0 * floor_res, 1e-11);
        for (int i = 1; i < 32; ++i) {
            double t = i / 32.0;
            for (int axis = 0; axis < axes; ++axis) {
                double delta = wrap_angle(b[axis] - a[axis]);
                if (delta > kTwoPi / 2.0) delta -= kTwoPi;
                waypoint[axis] = wrap_angle(a[axis] + t * delta);
            }
            if (eval.largest(waypoint) > rise) return true;
        }
        return false;
    };

    auto merge_or_add = [&](std::vector<double> polished, double residual) {
        for (size_t c = 0; c < centers.size(); ++c) {
            if (chebyshev_angle_distance(polished, centers[c]) <= kBruteForceMergeTol ||
                !barrier_between(polished, centers[c], std::max(residual, residuals[c]))) {
                if (residual < residuals[c]) {
                    centers[c] = std::move(polished);
                    residuals[c] = residual;
                }
                return;
            }
        }
        centers.push_back(std::move(polished));
        residuals.push_back(residual);
    };

    for (const Seed& seed : seeds) {
        bool near_known = false;
        for (const std::vector<double>& center : centers) {
            if (chebyshev_angle_distance(seed.thetas, center) <= 0.5 * h) {
                near_known = true;
                break;
            }
        }
        if (near_known) continue;
        std::vector<double> polished = polish(eval, seed.thetas, h / 8.0);
        double residual = eval.largest(polished);
        if (residual <= tol) merge_or_add(std::move(polished), residual);
    }

    // Two roots inside one grid cell leave a single polished center because
    // every surviving corner descends into the deeper basin. Probing a
    // geometric ladder of offsets around each center, with the descent step
    // matched to the offset, hands any twin minimum above the residual
    // resolution a start inside its own basin. Freshly added centers get
    // probed too.
    for (size_t c = 0; c < centers.size() && centers.size() < 4096; ++c) {
        for (int axis = 0; axis < axes; ++axis) {
            for (double dir : {1.0, -1.0}) {
                for (double delta = 2.0 * h; delta >= 1e-8; delta *= 0.5) {
                    std::vector<double> probe = centers[c];
                    probe[axis] = wrap_angle(probe[axis] + dir * delta);
                    std::vector<double> polished = polish(eval, probe, delta / 8.0);
                    double residual = eval.largest(polished);
                    if (residual <= tol) merge_or_add(std::move(polished), residual);
                }
            }
        }
    }

    std::vector<size_t> order(centers.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return centers[a] < centers[b]; });

    BruteForceResult result;
    result.support = eval.support;
    result.grid_steps = grid_steps;
    for (size_t idx : order) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        for (size_t l = 0; l < eval.support.size(); ++l) {
            int k = eval.support[l];
            double theta = l == 0 ? 0.0 : centers[idx][l - 1];
            v(k) = std::polar(eval.amplitudes(k), theta);
        }
        result.roots.push_back(BruteForceRoot{normalize(v), centers[idx], residuals[idx]});
    }
    return result;
}

bool verify_candidate(const PureState& s, const ProbabilityDistribution& position,
                      const ProbabilityDistribution& constructed, double tol) {
    return max_distribution_deviation(s, position, constructed) <= tol;
}

std::string to_string(Strategy strategy) {
    return strategy == Strategy::C2 ? "c2" : "povm";
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial & 0xffffffffu),
                      static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

CampaignReport run_campaign(int d, int trials, Strategy strategy, std::uint64_t seed,
                            double tol) {
    if (trials < 1) throw InvalidDistributionError("run_campaign: need at least one trial");
    CampaignReport report;
    report.d = d;
    report.strategy = strategy;
    report.trials = trials;

    OrthonormalBasis position = position_basis(d);
    OrthonormalBasis constructed = constructed_basis(d);
    CoeffSequence cs = coeff_sequence(d);

    auto start = std::chrono::steady_clock::now();
    long long candidate_total = 0;
    double fidelity_total = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng = trial_rng(seed, static_cast<std::uint64_t>(t));
        PureState truth = haar_random(d, rng);
        ProbabilityDistribution p = born_distribution(truth, position);

        double best = 0.0;
        int count = 0;
        bool within_bound = true;
        if (strategy == Strategy::C2) {
            ProbabilityDistribution q = born_distribution(truth, constructed);
            if (in_measure_zero_set(truth, cs, tol).in_set) ++report.measure_zero_hits;
            C2Reconstruction rec = reconstruct_via_c2(p, q, tol);
            count = static_cast<int>(rec.candidates.size());
            for (const PureState& candidate : rec.candidates) {
                best = std::max(best, fidelity(candidate, truth));
            }
            int j = support_of(truth).size();
            within_bound = count <= (1 << (j - 1));
        } else {
            ExactStateOracle oracle(truth);
            PovmReconstruction rec = reconstruct_via_povm(p, oracle, d);
            count = 1;
            best = fidelity(rec.state, truth);
        }
        candidate_total += count;
        fidelity_total += best;
        report.max_candidates = std::max(report.max_candidates, count);
        if (best >= 1.0 - 1e-9 && within_bound) ++report.successes;
    }
    auto stop = std::chrono::steady_clock::now();

    report.mean_candidates = static_cast<double>(candidate_total) / trials;
    report.mean_fidelity = fidelity_total / trials;
    report.seconds = std::chrono::duration<double>(stop - start).count();
    return report;
}

} // namespace qpr
