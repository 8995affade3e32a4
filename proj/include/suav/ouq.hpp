#pragma once

#include "suav/control.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace suav::ouq {

// One uncertain quantity with interval bounds and the number of atoms
// its finite-support marginal may carry.
struct BoundedInput {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    int support_points = 2;

    void validate() const;
};

struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

// Finite-support product measure: one list of atoms per input, weights
// summing to one per input.
struct ProductMeasure {
    std::vector<std::vector<Atom>> marginals;

    void validate(const std::vector<BoundedInput> &inputs) const;
};

using ResponseFunction = std::function<double(const std::vector<double> &)>;

// The admissible family: product measures over the input box whose mean
// response does not exceed mean_constraint.
struct AdmissibleSet {
    std::vector<BoundedInput> inputs;
    ResponseFunction response;
    double mean_constraint = 1.0;
};

struct FailureProbability {
    double probability = 0.0; // mu[response > 1]
    double mean_response = 0.0;
    bool mean_constraint_satisfied = true;
};

// Exact failure probability of the response under the measure, by
// enumeration of atom combinations. Evaluation failures propagate with
// the offending atom coordinates in the message.
FailureProbability failure_probability(const ProductMeasure &measure,
                                       const AdmissibleSet &admissible);

struct SearchBudget {
    int starts = 32;
    int iterations = 40;
    std::uint64_t seed = 0;
};

struct BoundEstimate {
    double value = 0.0;
    ProductMeasure witness;
    long response_evaluations = 0;
    bool feasible = true;
};

// Estimate of the optimal upper bound U(A) = sup mu[response > 1] over
// finite-support product measures, by multi-start coordinate search:
// atom locations move between the interval endpoints of each input and
// the per-input weights are re-optimized exactly (linear program on the
// simplex under the mean cap). The returned value is achieved by the
// witness measure, so it is a certified lower estimate of the supremum
// over the full family.
BoundEstimate ouq_upper_bound(const AdmissibleSet &admissible, const SearchBudget &budget);

// Estimate of the lower bound L(A) = inf mu[response > 1]; a witness
// supported entirely on non-failure points certifies L = 0.
BoundEstimate ouq_lower_bound(const AdmissibleSet &admissible, const SearchBudget &budget);

// --- deterministic gain-region maps ---------------------------------------

struct GainMapCell {
    double kp = 0.0;
    double kd = 0.0;
    double pnon_max = 0.0;
    double overshoot = 0.0;
    double vmax = 0.0;
    double peak_time = 0.0; // NaN when the response has no peak
    bool diverged = false;
};

struct GainMap {
    std::vector<double> kp_grid;
    std::vector<double> kd_grid;
    std::vector<GainMapCell> cells; // row-major over (kp, kd)

    [[nodiscard]] const GainMapCell &at(std::size_t kp_index, std::size_t kd_index) const;
};

// Sweep the force-channel proportional and derivative gains over the
// given ranges, running the scenario template once per cell and
// recording max P_non, overshoot, max speed, and peak time. Diverged
// runs are marked, not dropped. Cells are independent and evaluated in
// parallel; the result is deterministic.
GainMap gain_region_map(const control::ControlScenario &scenario_template,
                        const BoundedInput &kp_range, const BoundedInput &kd_range,
                        int kp_count, int kd_count);

struct FeasibilityConstraints {
    std::optional<double> max_pnon;
    std::optional<double> max_overshoot;
    std::optional<double> min_velocity;
    std::optional<double> max_peak_time; // cells without a peak fail this constraint
};

struct FeasibleRegion {
    std::vector<bool> mask; // parallel to GainMap::cells
    std::size_t feasible_count = 0;
    double kp_min = 0.0, kp_max = 0.0;
    double kd_min = 0.0, kd_max = 0.0; // extents of the feasible cells
};

// Per-cell conjunction of the constraints over a populated map.
FeasibleRegion feasible_region(const GainMap &map, const FeasibilityConstraints &constraints);

} // namespace suav::ouq
