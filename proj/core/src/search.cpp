#include "bsdeploy/search.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "bsdeploy/coverage.hpp"

namespace bsdeploy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.618;

void check_range(int num_bs, const OptimizationLimits& limits) {
    if (num_bs < 1 || num_bs > limits.max_bs) {
        throw std::out_of_range("N_B = " + std::to_string(num_bs) + " outside [1, N_B,max]");
    }
}

void finish(CostEvaluation& e, const CostModel& cm, const OptimizationLimits& limits) {
    e.feasible = e.allocation.within(limits.max_power);
    e.cost = e.feasible ? total_cost(e.num_bs, e.allocation.tx_power, cm) : kInf;
}

int isqrt_floor(double x) { return x <= 0.0 ? 0 : static_cast<int>(std::floor(std::sqrt(x))); }

}  // namespace

SearchKey CostEvaluation::key() const {
    if (feasible) return {true, cost};
    return {false, allocation.tx_power};
}

double CostEvaluation::unconstrained_cost(const CostModel& cm) const {
    return total_cost(num_bs, allocation.tx_power, cm);
}

// ---------------------------------------------------------------------------

struct DeploymentModel::Entry {
    std::once_flag main_once;
    std::once_flag relaxed_once;
    std::optional<RadialLayout> layout;
    std::vector<FarthestUEDistribution> cells;
    std::optional<SquareDivision> division;
    std::optional<FarthestUEDistribution> relaxed;
};

DeploymentModel::DeploymentModel(FieldSpec field, DensityMode mode) : field_(field), mode_(mode) {
    field_.validate();
}

DeploymentModel::~DeploymentModel() = default;

DeploymentModel::Entry& DeploymentModel::entry(int num_bs) const {
    if (num_bs < 1) throw std::out_of_range("N_B must be >= 1");
    Entry* e = nullptr;
    {
        std::lock_guard lock(mu_);
        auto& slot = entries_[num_bs];
        if (!slot) slot = std::make_unique<Entry>();
        e = slot.get();
    }
    std::call_once(e->main_once, [&] {
        if (field_.shape == FieldShape::Circular) {
            e->layout = optimal_layout(num_bs, field_.radius);
            e->cells = layout_distributions(*e->layout, field_, mode_);
        } else {
            e->division = square_division(num_bs, field_.side);
            e->cells.push_back(square_distribution(e->division->columns, e->division->rows, field_, mode_));
        }
    });
    return *e;
}

const RadialLayout& DeploymentModel::layout(int num_bs) const {
    if (field_.shape != FieldShape::Circular) throw std::logic_error("radial layout of a square field");
    return *entry(num_bs).layout;
}

const std::vector<FarthestUEDistribution>& DeploymentModel::cells(int num_bs) const {
    return entry(num_bs).cells;
}

const SquareDivision& DeploymentModel::division(int num_bs) const {
    if (field_.shape != FieldShape::Square) throw std::logic_error("square division of a circular field");
    return *entry(num_bs).division;
}

const FarthestUEDistribution& DeploymentModel::square_cell(int num_bs) const {
    if (field_.shape != FieldShape::Square) throw std::logic_error("square cell of a circular field");
    return entry(num_bs).cells.front();
}

const FarthestUEDistribution& DeploymentModel::square_relaxed_cell(int num_bs) const {
    if (field_.shape != FieldShape::Square) throw std::logic_error("square cell of a circular field");
    Entry& e = entry(num_bs);
    std::call_once(e.relaxed_once, [&] {
        const double p = std::sqrt(static_cast<double>(num_bs));
        e.relaxed = square_distribution(p, p, field_, mode_);
    });
    return *e.relaxed;
}

// ---------------------------------------------------------------------------

CostEvaluation cost_function(int num_bs, const DeploymentModel& model, const ChannelParams& ch,
                             const CostModel& cm, const OptimizationLimits& limits) {
    check_range(num_bs, limits);
    CostEvaluation e;
    e.num_bs = num_bs;
    if (model.field().shape == FieldShape::Circular) {
        e.layout = model.layout(num_bs);
    } else {
        e.division = model.division(num_bs);
    }
    e.allocation = optimal_power(model.cells(num_bs), ch, limits.epsilon);
    finish(e, cm, limits);
    return e;
}

CostEvaluation cost_function(int num_bs, const FieldSpec& field, const ChannelParams& ch,
                             const CostModel& cm, const OptimizationLimits& limits, DensityMode mode) {
    const DeploymentModel model(field, mode);
    return cost_function(num_bs, model, ch, cm, limits);
}

CostEvaluation square_relaxed_cost(int num_bs, const DeploymentModel& model, const ChannelParams& ch,
                                   const CostModel& cm, const OptimizationLimits& limits) {
    check_range(num_bs, limits);
    CostEvaluation e;
    e.num_bs = num_bs;
    const FarthestUEDistribution& cell = model.square_relaxed_cell(num_bs);
    e.allocation = optimal_power(std::span(&cell, 1), ch, limits.epsilon);
    finish(e, cm, limits);
    return e;
}

// ---------------------------------------------------------------------------

GoldenResult golden_section(const std::function<SearchKey(int)>& f, int lower, int upper, int tolerance) {
    if (lower > upper) throw std::invalid_argument("golden_section needs lower <= upper");
    if (tolerance < 0) throw std::invalid_argument("tolerance must be >= 0");
    GoldenResult res;

    // Evaluates the missing points concurrently and records them in order.
    auto evaluate = [&](std::vector<int> points) {
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
        std::erase_if(points, [&](int n) { return res.probes.contains(n); });
        std::vector<std::future<SearchKey>> jobs;
        for (std::size_t i = 1; i < points.size(); ++i) {
            jobs.push_back(std::async(std::launch::async, f, points[i]));
        }
        if (!points.empty()) res.probes[points[0]] = f(points[0]);
        for (std::size_t i = 1; i < points.size(); ++i) res.probes[points[i]] = jobs[i - 1].get();
    };

    int l = lower;
    int u = upper;
    int p = 0;
    int q = 0;
    // Rounded probes can meet or cross on short brackets; keep p < q.
    auto place_probes = [&] {
        p = static_cast<int>(std::ceil(u - kGolden * (u - l)));
        q = static_cast<int>(std::floor(l + kGolden * (u - l)));
        if (p > q) std::swap(p, q);
        if (p == q) {
            if (q < u) ++q;
            else --p;
        }
    };
    while (u - l > tolerance) {
        place_probes();
        evaluate({p, q});
        res.trace.push_back({l, u, p, q});
        if (res.probes.at(p) <= res.probes.at(q)) {
            u = q;
        } else {
            l = p;
        }
    }
    res.final_lower = l;
    res.final_upper = u;
    res.verbatim_best = (u + l + 1) / 2;

    std::vector<int> bracket;
    for (int n = l; n <= u; ++n) bracket.push_back(n);
    evaluate(bracket);
    res.verbatim_key = res.probes.at(res.verbatim_best);
    res.best = l;
    res.best_key = res.probes.at(l);
    for (int n = l + 1; n <= u; ++n) {
        if (res.probes.at(n) < res.best_key) {
            res.best = n;
            res.best_key = res.probes.at(n);
        }
    }
    return res;
}

GoldenResult golden_section(const std::function<double(int)>& f, int lower, int upper, int tolerance) {
    return golden_section(std::function<SearchKey(int)>([&f](int n) { return SearchKey::of(f(n)); }), lower,
                          upper, tolerance);
}

// ---------------------------------------------------------------------------

namespace {

SearchResult scan_range(const DeploymentModel& model, const ChannelParams& ch, const CostModel& cm,
                        const OptimizationLimits& limits, int lo, int hi) {
    SearchResult out;
    out.range_lower = lo;
    out.range_upper = hi;
    std::vector<std::future<CostEvaluation>> jobs;
    for (int n = lo; n <= hi; ++n) {
        jobs.push_back(std::async(std::launch::async, [&, n] { return cost_function(n, model, ch, cm, limits); }));
    }
    bool first = true;
    for (auto& j : jobs) {
        CostEvaluation e = j.get();
        ++out.evaluations;
        if (first || e.key() < out.evaluation.key()) out.evaluation = std::move(e);
        first = false;
    }
    return out;
}

}  // namespace

SearchResult optimize_deployment(const DeploymentModel& model, const ChannelParams& ch, const CostModel& cm,
                                 const OptimizationLimits& limits) {
    limits.validate();
    ch.validate();
    cm.validate();
    if (model.field().shape == FieldShape::Square) return square_optimize(model, ch, cm, limits);
    SearchResult out;
    const auto f = [&](int n) { return cost_function(n, model, ch, cm, limits).key(); };
    out.golden = golden_section(std::function<SearchKey(int)>(f), 1, limits.max_bs, limits.tolerance);
    out.evaluation = cost_function(out.golden.best, model, ch, cm, limits);
    out.range_lower = 1;
    out.range_upper = limits.max_bs;
    out.evaluations = out.golden.evaluations();
    return out;
}

double square_closed_form_seed(double side, const ChannelParams& ch, const CostModel& cm, double epsilon) {
    const double alpha = ch.path_loss_exp;
    if (!(alpha > 2.0)) throw std::invalid_argument("closed-form seed needs alpha > 2");
    if (!(cm.b_b > 0.0)) throw std::invalid_argument("closed-form seed needs b_B > 0");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    const double c_b = ch.noise_threshold() / epsilon;
    return 0.5 * side * side * std::pow((0.5 * alpha - 1.0) * c_b / cm.b_b, 2.0 / alpha);
}

SearchResult square_optimize(const DeploymentModel& model, const ChannelParams& ch, const CostModel& cm,
                             const OptimizationLimits& limits) {
    const FieldSpec& field = model.field();
    if (field.shape != FieldShape::Square) throw std::invalid_argument("square_optimize needs a square field");
    limits.validate();
    const double a = field.side;
    const double alpha = ch.path_loss_exp;
    const double c_b = ch.noise_threshold() / limits.epsilon;
    auto clip = [&](int n) { return std::clamp(n, 1, limits.max_bs); };

    if (model.mode() == DensityMode::Asymptotic) {
        int lo = 1;
        int hi = 1;
        double seed = 0.0;
        if (alpha <= 2.0) {
            // Cost is affine in N_B once power is forced to the limit: fewest BSs
            // that fit, max{1, floor((a C_B)^2 / (2 P_t,max))}, then the next square.
            seed = std::max(1.0, std::floor(0.5 * a * a * c_b / limits.max_power));
            lo = clip(static_cast<int>(seed));
            const int root = isqrt_floor(seed);
            hi = clip(std::max(lo, (root + 1) * (root + 1)));
        } else {
            seed = square_closed_form_seed(a, ch, cm, limits.epsilon);
            const double p_seed = c_b * std::pow(a / std::sqrt(2.0 * seed), alpha);
            double center = seed;
            if (p_seed > limits.max_power) {
                // Smallest p = q count whose power fits the limit.
                center = 0.5 * a * a * std::pow(c_b / limits.max_power, 2.0 / alpha);
            }
            const int below = isqrt_floor(center);
            const int above = static_cast<int>(std::ceil(std::sqrt(center)));
            lo = clip(below * below);
            hi = clip(above * above);
        }
        SearchResult out = scan_range(model, ch, cm, limits, lo, hi);
        out.seed = seed;
        return out;
    }

    const auto relaxed = [&](int n) { return square_relaxed_cost(n, model, ch, cm, limits).key(); };
    GoldenResult g = golden_section(std::function<SearchKey(int)>(relaxed), 1, limits.max_bs, limits.tolerance);
    const double root = std::sqrt(static_cast<double>(g.best));
    const int lo = clip(static_cast<int>(std::ceil((root - 1.0) * (root - 1.0) - 1e-9)));
    const int hi = clip(static_cast<int>(std::floor((root + 1.0) * (root + 1.0) + 1e-9)));
    SearchResult out = scan_range(model, ch, cm, limits, lo, hi);
    out.seed = static_cast<double>(g.best);
    out.evaluations += g.evaluations();
    out.golden = std::move(g);
    return out;
}

std::optional<int> fewest_bs_at_power(const DeploymentModel& model, const ChannelParams& ch, double epsilon,
                                      double tx_power, int max_bs) {
    for (int n = 1; n <= max_bs; ++n) {
        if (optimal_power(model.cells(n), ch, epsilon).tx_power <= tx_power) return n;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Fixed: return "fixed";
        case Scheme::ONB: return "onb";
        case Scheme::OPA: return "opa";
        case Scheme::Joint: return "joint";
    }
    return "unknown";
}

RadialLayout fixed_layout(const FixedScheme& fixed, double radius) {
    if (fixed.num_bs < 1) throw std::invalid_argument("fixed scheme needs N_B >= 1");
    if (fixed.num_bs == 1) return make_layout({SectoringFamily::MK, 1, 1}, {0.0}, radius);
    return make_layout({SectoringFamily::MK, 1, fixed.num_bs}, {fixed.distance}, radius);
}

std::vector<SchemeRow> compare_schemes(const DeploymentModel& model, const ChannelParams& ch,
                                       const CostModel& cm, const OptimizationLimits& limits,
                                       const FixedScheme& fixed) {
    const FieldSpec& field = model.field();
    if (field.shape != FieldShape::Circular) throw std::invalid_argument("scheme comparison needs a circular field");
    limits.validate();
    std::vector<SchemeRow> rows;

    SchemeRow fx{Scheme::Fixed, fixed.num_bs, fixed.tx_power};
    fx.cost = total_cost(fixed.num_bs, fixed.tx_power, cm);
    fx.within_power_limit = fixed.tx_power <= limits.max_power;
    fx.coverage_ok = true;
    for (const auto& cell : layout_distributions(fixed_layout(fixed, field.radius), field, model.mode())) {
        if (coverage_far(cell, ch, fixed.tx_power) < 1.0 - limits.epsilon) fx.coverage_ok = false;
    }
    rows.push_back(fx);

    SchemeRow onb{Scheme::ONB, limits.max_bs, fixed.tx_power};
    onb.within_power_limit = fixed.tx_power <= limits.max_power;
    if (const auto n = fewest_bs_at_power(model, ch, limits.epsilon, fixed.tx_power, limits.max_bs)) {
        onb.num_bs = *n;
        onb.coverage_ok = true;
    }
    onb.cost = total_cost(onb.num_bs, onb.tx_power, cm);
    rows.push_back(onb);

    SchemeRow opa{Scheme::OPA, fixed.num_bs};
    opa.tx_power = optimal_power(model.cells(fixed.num_bs), ch, limits.epsilon).tx_power;
    opa.cost = total_cost(opa.num_bs, opa.tx_power, cm);
    opa.coverage_ok = true;
    opa.within_power_limit = opa.tx_power <= limits.max_power;
    rows.push_back(opa);

    const SearchResult joint = optimize_deployment(model, ch, cm, limits);
    SchemeRow jt{Scheme::Joint, joint.num_bs(), joint.evaluation.allocation.tx_power};
    jt.cost = joint.evaluation.unconstrained_cost(cm);
    jt.coverage_ok = true;
    jt.within_power_limit = joint.feasible();
    rows.push_back(jt);

    for (SchemeRow& r : rows) r.reduction_pct = 100.0 * (1.0 - r.cost / fx.cost);
    return rows;
}

}  // namespace bsdeploy
