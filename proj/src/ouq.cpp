#include "suav/ouq.hpp"

#include "suav/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

namespace suav::ouq {

namespace {

constexpr double kFailureThreshold = 1.0;
constexpr double kMeanTolerance = 1e-9;

std::string atom_coordinates(const std::vector<double> &point) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < point.size(); ++i) out << (i ? ", " : "") << point[i];
    out << ")";
    return out.str();
}

// Response evaluator with exact-key memoization; atoms revisit the same
// locations constantly during the coordinate search.
class CachedResponse {
  public:
    CachedResponse(ResponseFunction fn) : fn_(std::move(fn)) {}

    double operator()(const std::vector<double> &point) {
        auto it = cache_.find(point);
        if (it != cache_.end()) return it->second;
        double value = 0.0;
        try {
            value = fn_(point);
        } catch (const std::exception &e) {
            throw Error(std::string("response evaluation failed at atom ") +
                        atom_coordinates(point) + ": " + e.what());
        }
        ++evaluations_;
        cache_.emplace(point, value);
        return value;
    }

    [[nodiscard]] long evaluations() const { return evaluations_; }

  private:
    ResponseFunction fn_;
    std::map<std::vector<double>, double> cache_;
    long evaluations_ = 0;
};

struct MeasureStats {
    double probability = 0.0;
    double mean = 0.0;
};

// Enumerate all atom combinations of the product measure.
MeasureStats evaluate_measure(const ProductMeasure &measure, CachedResponse &response) {
    const std::size_t m = measure.marginals.size();
    std::vector<std::size_t> index(m, 0);
    std::vector<double> point(m, 0.0);
    MeasureStats stats;
    while (true) {
        double weight = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            weight *= measure.marginals[j][index[j]].weight;
            point[j] = measure.marginals[j][index[j]].location;
        }
        if (weight > 0.0) {
            const double value = response(point);
            stats.mean += weight * value;
            if (value > kFailureThreshold) stats.probability += weight;
        }
        std::size_t j = 0;
        for (; j < m; ++j) {
            if (++index[j] < measure.marginals[j].size()) break;
            index[j] = 0;
        }
        if (j == m) break;
    }
    return stats;
}

// Conditional failure probability and mean response per atom of input j,
// holding all other marginals fixed.
void conditional_stats(const ProductMeasure &measure, std::size_t j, CachedResponse &response,
                       std::vector<double> &fail_out, std::vector<double> &mean_out) {
    const std::size_t m = measure.marginals.size();
    const std::size_t atoms_j = measure.marginals[j].size();
    fail_out.assign(atoms_j, 0.0);
    mean_out.assign(atoms_j, 0.0);

    std::vector<std::size_t> index(m, 0);
    std::vector<double> point(m, 0.0);
    while (true) {
        double weight_others = 1.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (k == j) continue;
            weight_others *= measure.marginals[k][index[k]].weight;
        }
        if (weight_others > 0.0) {
            for (std::size_t k = 0; k < m; ++k)
                if (k != j) point[k] = measure.marginals[k][index[k]].location;
            for (std::size_t a = 0; a < atoms_j; ++a) {
                point[j] = measure.marginals[j][a].location;
                const double value = response(point);
                mean_out[a] += weight_others * value;
                if (value > kFailureThreshold) fail_out[a] += weight_others;
            }
        }
        // Odometer over every input except j.
        std::size_t k = 0;
        for (; k < m; ++k) {
            if (k == j) continue;
            if (++index[k] < measure.marginals[k].size()) break;
            index[k] = 0;
        }
        if (k == m) break;
    }
}

// Best weight vector for input j within the family: linear objective on
// the simplex with one linear mean constraint, so an optimum lies on a
// vertex supported on at most two atoms. Returns false when no feasible
// vertex exists.
bool optimize_weights(std::vector<Atom> &atoms, const std::vector<double> &fail,
                      const std::vector<double> &mean, double constraint, bool maximize) {
    const std::size_t n = atoms.size();
    double best_value = maximize ? -1.0 : 2.0;
    std::vector<double> best_weights;

    const auto consider = [&](const std::vector<double> &w, double value) {
        if (best_weights.empty() || (maximize ? value > best_value : value < best_value)) {
            best_value = value;
            best_weights = w;
        }
    };

    std::vector<double> w(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        if (mean[a] <= constraint + kMeanTolerance) {
            std::fill(w.begin(), w.end(), 0.0);
            w[a] = 1.0;
            consider(w, fail[a]);
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (std::abs(mean[a] - mean[b]) < 1e-15) continue;
            // Weight on atom a at which the mean constraint binds.
            const double wa = (constraint - mean[b]) / (mean[a] - mean[b]);
            if (wa <= 0.0 || wa >= 1.0) continue;
            std::fill(w.begin(), w.end(), 0.0);
            w[a] = wa;
            w[b] = 1.0 - wa;
            consider(w, wa * fail[a] + (1.0 - wa) * fail[b]);
        }
    }
    if (best_weights.empty()) return false;
    for (std::size_t a = 0; a < n; ++a) atoms[a].weight = best_weights[a];
    return true;
}

// Shift weight toward the lowest-conditional-mean atoms until the mean
// constraint holds. Returns false when even that cannot restore
// feasibility.
bool repair_mean(ProductMeasure &measure, const AdmissibleSet &admissible,
                 CachedResponse &response) {
    std::vector<double> fail, mean;
    for (std::size_t pass = 0; pass < measure.marginals.size(); ++pass) {
        const MeasureStats stats = evaluate_measure(measure, response);
        if (stats.mean <= admissible.mean_constraint + kMeanTolerance) return true;
        bool moved = false;
        for (std::size_t j = 0; j < measure.marginals.size() && !moved; ++j) {
            conditional_stats(measure, j, response, fail, mean);
            const std::size_t lowest = static_cast<std::size_t>(
                std::min_element(mean.begin(), mean.end()) - mean.begin());
            if (mean[lowest] >= stats.mean) continue;
            const double lambda =
                std::min(1.0, (stats.mean - admissible.mean_constraint) /
                                  (stats.mean - mean[lowest]));
            for (std::size_t a = 0; a < measure.marginals[j].size(); ++a) {
                measure.marginals[j][a].weight *= (1.0 - lambda);
                if (a == lowest) measure.marginals[j][a].weight += lambda;
            }
            moved = true;
        }
        if (!moved) return false;
    }
    const MeasureStats stats = evaluate_measure(measure, response);
    return stats.mean <= admissible.mean_constraint + kMeanTolerance;
}

BoundEstimate search_bound(const AdmissibleSet &admissible, const SearchBudget &budget,
                           bool maximize) {
    if (!admissible.response) throw ConfigError("admissible set has no response function");
    for (const auto &input : admissible.inputs) input.validate();
    if (admissible.inputs.empty()) throw ConfigError("admissible set has no inputs");

    CachedResponse response(admissible.response);
    const std::size_t m = admissible.inputs.size();

    BoundEstimate best_feasible;
    bool found_feasible = false;
    BoundEstimate best_any; // fallback when the constraint set is infeasible
    bool found_any = false;

    const auto better = [&](double candidate, double incumbent) {
        return maximize ? candidate > incumbent : candidate < incumbent;
    };

    for (int start = 0; start < budget.starts; ++start) {
        std::mt19937_64 rng(budget.seed * 1000003ULL + static_cast<std::uint64_t>(start));
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        ProductMeasure measure;
        measure.marginals.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            const auto &input = admissible.inputs[j];
            auto &atoms = measure.marginals[j];
            atoms.resize(static_cast<std::size_t>(input.support_points));
            double total = 0.0;
            for (auto &atom : atoms) {
                atom.location = unit(rng) < 0.5 ? input.lower : input.upper;
                atom.weight = unit(rng) + 1e-3;
                total += atom.weight;
            }
            for (auto &atom : atoms) atom.weight /= total;
        }

        repair_mean(measure, admissible, response);
        MeasureStats stats = evaluate_measure(measure, response);

        std::vector<double> fail, mean;
        for (int iter = 0; iter < budget.iterations; ++iter) {
            bool improved = false;
            for (std::size_t j = 0; j < m; ++j) {
                const auto &input = admissible.inputs[j];
                auto &atoms = measure.marginals[j];
                for (std::size_t a = 0; a < atoms.size(); ++a) {
                    // Coordinate move: flip the atom between the interval
                    // endpoints, re-optimizing this input's weights each
                    // time.
                    const double candidates[2] = {input.lower, input.upper};
                    double best_loc = atoms[a].location;
                    double best_obj = stats.probability;
                    std::vector<Atom> best_atoms = atoms;
                    for (double loc : candidates) {
                        atoms[a].location = loc;
                        conditional_stats(measure, j, response, fail, mean);
                        std::vector<Atom> trial = atoms;
                        if (!optimize_weights(trial, fail, mean, admissible.mean_constraint,
                                              maximize))
                            continue;
                        double obj = 0.0;
                        for (std::size_t k = 0; k < trial.size(); ++k)
                            obj += trial[k].weight * fail[k];
                        if (better(obj, best_obj + (maximize ? 1e-15 : -1e-15))) {
                            best_obj = obj;
                            best_loc = loc;
                            best_atoms = trial;
                            improved = true;
                        }
                    }
                    atoms = best_atoms;
                    atoms[a].location = best_loc;
                    stats = evaluate_measure(measure, response);
                }
            }
            if (!improved) break;
        }

        stats = evaluate_measure(measure, response);
        const bool feasible_now =
            stats.mean <= admissible.mean_constraint + kMeanTolerance;
        if (feasible_now && (!found_feasible || better(stats.probability, best_feasible.value))) {
            best_feasible.value = stats.probability;
            best_feasible.witness = measure;
            found_feasible = true;
        }
        if (!found_any || better(stats.probability, best_any.value)) {
            best_any.value = stats.probability;
            best_any.witness = measure;
            found_any = true;
        }
    }

    BoundEstimate out = found_feasible ? best_feasible : best_any;
    out.feasible = found_feasible;
    out.response_evaluations = response.evaluations();
    return out;
}

} // namespace

void BoundedInput::validate() const {
    if (!(lower <= upper)) throw ConfigError("bounded input '" + name + "': lower > upper");
    if (support_points < 1)
        throw ConfigError("bounded input '" + name + "': support_points must be >= 1");
    if (!std::isfinite(lower) || !std::isfinite(upper))
        throw ConfigError("bounded input '" + name + "': bounds must be finite");
}

void ProductMeasure::validate(const std::vector<BoundedInput> &inputs) const {
    if (marginals.size() != inputs.size())
        throw ConfigError("product measure does not match the input list");
    for (std::size_t j = 0; j < marginals.size(); ++j) {
        double total = 0.0;
        for (const auto &atom : marginals[j]) {
            if (atom.weight < 0.0) throw ConfigError("measure weights must be non-negative");
            if (atom.location < inputs[j].lower - 1e-12 || atom.location > inputs[j].upper + 1e-12)
                throw ConfigError("atom outside the bounds of input '" + inputs[j].name + "'");
            total += atom.weight;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw ConfigError("weights of input '" + inputs[j].name + "' must sum to 1");
    }
}

FailureProbability failure_probability(const ProductMeasure &measure,
                                       const AdmissibleSet &admissible) {
    if (!admissible.response) throw ConfigError("admissible set has no response function");
    measure.validate(admissible.inputs);
    CachedResponse response(admissible.response);
    const MeasureStats stats = evaluate_measure(measure, response);
    return {stats.probability, stats.mean,
            stats.mean <= admissible.mean_constraint + kMeanTolerance};
}

BoundEstimate ouq_upper_bound(const AdmissibleSet &admissible, const SearchBudget &budget) {
    return search_bound(admissible, budget, /*maximize=*/true);
}

BoundEstimate ouq_lower_bound(const AdmissibleSet &admissible, const SearchBudget &budget) {
    return search_bound(admissible, budget, /*maximize=*/false);
}

const GainMapCell &GainMap::at(std::size_t kp_index, std::size_t kd_index) const {
    return cells.at(kp_index * kd_grid.size() + kd_index);
}

GainMap gain_region_map(const control::ControlScenario &scenario_template,
                        const BoundedInput &kp_range, const BoundedInput &kd_range,
                        int kp_count, int kd_count) {
    if (kp_count < 2 || kd_count < 2)
        throw ConfigError("gain map needs at least 2 samples per axis");
    kp_range.validate();
    kd_range.validate();
    scenario_template.validate();

    GainMap map;
    for (int i = 0; i < kp_count; ++i)
        map.kp_grid.push_back(kp_range.lower +
                              (kp_range.upper - kp_range.lower) * i / (kp_count - 1));
    for (int j = 0; j < kd_count; ++j)
        map.kd_grid.push_back(kd_range.lower +
                              (kd_range.upper - kd_range.lower) * j / (kd_count - 1));
    map.cells.resize(static_cast<std::size_t>(kp_count) * static_cast<std::size_t>(kd_count));

    // The map tracks the channel driven by a step in the template.
    const bool x_is_step = scenario_template.x_reference.kind == control::ReferenceKind::Step &&
                           scenario_template.x_reference.amplitude != 0.0;

    const auto run_cell = [&](std::size_t flat) {
        const std::size_t i = flat / map.kd_grid.size();
        const std::size_t j = flat % map.kd_grid.size();
        GainMapCell cell;
        cell.kp = map.kp_grid[i];
        cell.kd = map.kd_grid[j];

        control::ControlScenario scenario = scenario_template;
        scenario.gains_force.kp = cell.kp;
        scenario.gains_force.kd = cell.kd;
        try {
            const control::SimResult res = control::simulate_closed_loop(scenario);
            for (std::size_t k = 0; k < res.size(); ++k) {
                cell.pnon_max = std::max(cell.pnon_max, res.pnon[k]);
                const double ct = std::cos(res.theta[k]), st = std::sin(res.theta[k]);
                const double x_dot = res.u[k] * ct + res.w[k] * st;
                const double z_dot = -res.u[k] * st + res.w[k] * ct;
                cell.vmax = std::max(cell.vmax, std::hypot(x_dot, z_dot));
            }
            const auto &metrics = x_is_step ? res.metrics_x : res.metrics_z;
            cell.overshoot = metrics && metrics->overshoot ? *metrics->overshoot : 0.0;
            cell.peak_time = metrics && metrics->peak_time_s
                                 ? *metrics->peak_time_s
                                 : std::numeric_limits<double>::quiet_NaN();
        } catch (const DivergenceError &) {
            cell.diverged = true;
            cell.pnon_max = cell.overshoot = cell.vmax = cell.peak_time =
                std::numeric_limits<double>::quiet_NaN();
        }
        map.cells[flat] = cell;
    };

    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(map.cells.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned wkr = 0; wkr < workers; ++wkr) {
        pool.emplace_back([&] {
            for (std::size_t flat = next.fetch_add(1); flat < map.cells.size();
                 flat = next.fetch_add(1))
                run_cell(flat);
        });
    }
    for (auto &th : pool) th.join();
    return map;
}

FeasibleRegion feasible_region(const GainMap &map, const FeasibilityConstraints &constraints) {
    if (map.cells.empty()) throw ConfigError("feasible_region needs a populated map");
    FeasibleRegion region;
    region.mask.resize(map.cells.size(), false);
    bool first = true;
    for (std::size_t i = 0; i < map.cells.size(); ++i) {
        const GainMapCell &cell = map.cells[i];
        if (cell.diverged) continue;
        bool ok = true;
        if (constraints.max_pnon && !(cell.pnon_max <= *constraints.max_pnon)) ok = false;
        if (constraints.max_overshoot && !(cell.overshoot <= *constraints.max_overshoot))
            ok = false;
        if (constraints.min_velocity && !(cell.vmax >= *constraints.min_velocity)) ok = false;
        if (constraints.max_peak_time && !(cell.peak_time <= *constraints.max_peak_time))
            ok = false;
        region.mask[i] = ok;
        if (!ok) continue;
        ++region.feasible_count;
        if (first) {
            region.kp_min = region.kp_max = cell.kp;
            region.kd_min = region.kd_max = cell.kd;
            first = false;
        } else {
            region.kp_min = std::min(region.kp_min, cell.kp);
            region.kp_max = std::max(region.kp_max, cell.kp);
            region.kd_min = std::min(region.kd_min, cell.kd);
            region.kd_max = std::max(region.kd_max, cell.kd);
        }
    }
    return region;
}

} // namespace suav::ouq
