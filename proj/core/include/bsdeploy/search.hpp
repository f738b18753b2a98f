#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bsdeploy/allocation.hpp"
#include "bsdeploy/distdist.hpp"
#include "bsdeploy/geometry.hpp"
#include "bsdeploy/model.hpp"

namespace bsdeploy {

// Search objective. Feasible points order by cost; infeasible points come
// after every feasible one and order by how much power they lack, so a
// bracket that starts in the infeasible region still contracts toward it.
struct SearchKey {
    bool feasible = true;
    double value = 0.0;

    static SearchKey of(double cost) { return {true, cost}; }
    friend bool operator<(const SearchKey& a, const SearchKey& b) {
        if (a.feasible != b.feasible) return a.feasible;
        return a.value < b.value;
    }
    friend bool operator<=(const SearchKey& a, const SearchKey& b) { return !(b < a); }
};

struct CostEvaluation {
    int num_bs = 0;
    std::optional<RadialLayout> layout;      // circular field
    std::optional<SquareDivision> division;  // square field
    PowerAllocation allocation;
    double cost = 0.0;  // +inf when infeasible
    bool feasible = false;

    SearchKey key() const;
    // N_B (a_B P_t* + b_B) regardless of feasibility.
    double unconstrained_cost(const CostModel& cm) const;
};

// Per-N_B cell distributions for one field. They depend only on geometry and
// N_U, so one model serves every channel, cost and epsilon setting. Safe to
// query concurrently.
class DeploymentModel {
public:
    DeploymentModel(FieldSpec field, DensityMode mode);
    ~DeploymentModel();
    DeploymentModel(const DeploymentModel&) = delete;
    DeploymentModel& operator=(const DeploymentModel&) = delete;

    const FieldSpec& field() const { return field_; }
    DensityMode mode() const { return mode_; }

    // Circular: closed-form table layout (brute force beyond it) and its cells.
    const RadialLayout& layout(int num_bs) const;
    const std::vector<FarthestUEDistribution>& cells(int num_bs) const;
    // Square: minimum-|p - q| division and its representative cell.
    const SquareDivision& division(int num_bs) const;
    const FarthestUEDistribution& square_cell(int num_bs) const;
    // Square with p = q = sqrt(N_B), not necessarily integer.
    const FarthestUEDistribution& square_relaxed_cell(int num_bs) const;

private:
    struct Entry;
    Entry& entry(int num_bs) const;

    FieldSpec field_;
    DensityMode mode_;
    mutable std::mutex mu_;
    mutable std::map<int, std::unique_ptr<Entry>> entries_;
};

// Cost of deploying num_bs BSs: optimal layout, per-cell power
// bounds, common power and N_B (a_B P_t* + b_B). Infeasible when P_t* exceeds
// limits.max_power.
CostEvaluation cost_function(int num_bs, const DeploymentModel& model, const ChannelParams& ch,
                             const CostModel& cm, const OptimizationLimits& limits);
CostEvaluation cost_function(int num_bs, const FieldSpec& field, const ChannelParams& ch,
                             const CostModel& cm, const OptimizationLimits& limits, DensityMode mode);
// Square field with the p = q relaxation.
CostEvaluation square_relaxed_cost(int num_bs, const DeploymentModel& model, const ChannelParams& ch,
                                   const CostModel& cm, const OptimizationLimits& limits);

struct GoldenStep {
    int lower = 0;
    int upper = 0;
    int probe_p = 0;
    int probe_q = 0;
};

struct GoldenResult {
    int best = 0;  // minimum over the final bracket
    SearchKey best_key;
    int verbatim_best = 0;  // ceil((upper + lower) / 2) of the final bracket
    SearchKey verbatim_key;
    int final_lower = 0;
    int final_upper = 0;
    std::vector<GoldenStep> trace;
    std::map<int, SearchKey> probes;  // every distinct evaluation

    int evaluations() const { return static_cast<int>(probes.size()); }
};

// Integer golden-section search with ceil/floor probes and 0.618 contraction,
// stopping once upper - lower <= tolerance; the final bracket is then scanned
// exhaustively. Ties go to the smaller N_B. f is memoized and its two probes
// are evaluated concurrently, so it must be thread-safe.
GoldenResult golden_section(const std::function<SearchKey(int)>& f, int lower, int upper,
                            int tolerance);
GoldenResult golden_section(const std::function<double(int)>& f, int lower, int upper, int tolerance);

struct SearchResult {
    CostEvaluation evaluation;  // at the optimum
    GoldenResult golden;        // empty trace for pure scans
    int range_lower = 0;        // range the final answer was searched over
    int range_upper = 0;
    std::optional<double> seed;  // closed-form or relaxed N_B for square fields
    int evaluations = 0;

    int num_bs() const { return evaluation.num_bs; }
    bool feasible() const { return evaluation.feasible; }
};

// Joint optimum over N_B in [1, limits.max_bs]: golden section on the
// circular cost, square_optimize on square fields.
SearchResult optimize_deployment(const DeploymentModel& model, const ChannelParams& ch, const CostModel& cm,
                                 const OptimizationLimits& limits);

// Minimizer of N_B (c_B (a / sqrt(2 N_B))^alpha + b_B), c_B = T sigma^2 / epsilon:
// (a^2 / 2) ((alpha/2 - 1) c_B / b_B)^(2/alpha). Requires alpha > 2.
double square_closed_form_seed(double side, const ChannelParams& ch, const CostModel& cm, double epsilon);

// Square field. Asymptotic: closed-form seed, then a scan of the square
// numbers bracketing it (or bracketing the smallest N_B whose p = q power
// fits P_t,max when the seed does not); alpha = 2 uses the affine-cost rule.
// Moderate: golden section on the p = q relaxation, then a scan of
// [(sqrt(N) - 1)^2, (sqrt(N) + 1)^2] with integer divisions.
SearchResult square_optimize(const DeploymentModel& model, const ChannelParams& ch, const CostModel& cm,
                             const OptimizationLimits& limits);

// Fewest BSs in [1, max_bs] whose optimal power fits tx_power; nullopt when
// none does.
std::optional<int> fewest_bs_at_power(const DeploymentModel& model, const ChannelParams& ch, double epsilon,
                                      double tx_power, int max_bs);

enum class Scheme { Fixed, ONB, OPA, Joint };
std::string scheme_name(Scheme s);

// Reference deployment the other schemes are compared against.
struct FixedScheme {
    double tx_power = 4.0;
    int num_bs = 35;
    double distance = 250.0;  // d_1 of the single ring, 0 for one BS
};

struct SchemeRow {
    Scheme scheme = Scheme::Fixed;
    int num_bs = 0;
    double tx_power = 0.0;
    double cost = 0.0;
    // Every cell meets 1 - epsilon: exact coverage for Fixed, the power
    // bound for the optimized schemes.
    bool coverage_ok = false;
    bool within_power_limit = false;
    double reduction_pct = 0.0;  // relative to Fixed
};

// Fixed: the reference deployment. ONB: fewest BSs meeting the target at
// the fixed power (N_B <= N_B,max). OPA: fixed N_B with the optimal layout
// and its required power, reported even above P_t,max. Joint: the full
// optimizer. Schemes that miss the target keep their row with the flags set.
std::vector<SchemeRow> compare_schemes(const DeploymentModel& model, const ChannelParams& ch,
                                       const CostModel& cm, const OptimizationLimits& limits,
                                       const FixedScheme& fixed = {});

// Radial layout of the fixed scheme: sectoring k with one BS per sector.
RadialLayout fixed_layout(const FixedScheme& fixed, double radius);

}  // namespace bsdeploy
