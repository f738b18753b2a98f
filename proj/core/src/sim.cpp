#include "bsdeploy/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "bsdeploy/distdist.hpp"

namespace bsdeploy {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

// Runs body(begin, end) over contiguous chunks of [0, n).
template <class Body>
void parallel_for(long n, int threads, Body body) {
    int t = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    t = static_cast<int>(std::min<long>(t, std::max<long>(1, n / 64)));
    if (t <= 1) {
        body(0L, n);
        return;
    }
    std::vector<std::thread> pool;
    const long chunk = (n + t - 1) / t;
    for (int i = 0; i < t; ++i) {
        const long b = i * chunk;
        const long e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([=, &body] { body(b, e); });
    }
    for (auto& th : pool) th.join();
}

std::pair<double, double> cell_extent(const CellRegion& cell) {
    const auto [lo, hi] = bounding_box(cell);
    return {hi.x - lo.x, hi.y - lo.y};
}

}  // namespace

void McConfig::validate() const {
    if (deployments < 1) throw std::invalid_argument("deployments must be >= 1");
    if (fading_draws < 1) throw std::invalid_argument("fading draws must be >= 1");
}

Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t s = splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    return Rng(seq);
}

double CellSamples::acceptance_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(points.size()) / static_cast<double>(proposals);
}

CellSamples sample_cell_points(const CellRegion& cell, int n, Rng& rng) {
    const auto [lo, hi] = bounding_box(cell);
    CellSamples out;
    out.points.reserve(static_cast<std::size_t>(std::max(0, n)));
    while (static_cast<int>(out.points.size()) < n) {
        const Vec2 p{lo.x + (hi.x - lo.x) * uniform01(rng), lo.y + (hi.y - lo.y) * uniform01(rng)};
        ++out.proposals;
        if (cell.contains(p, 0.0)) out.points.push_back(p);
        if (out.proposals >= 1000 && out.acceptance_rate() < 0.01) {
            throw std::runtime_error("rejection sampling acceptance below 1%");
        }
    }
    return out;
}

Vec2 sample_field_point(const FieldSpec& field, Rng& rng, double cell_width, double cell_height) {
    if (field.shape == FieldShape::Circular) {
        const double r = field.radius * std::sqrt(uniform01(rng));
        const double t = kTwoPi * uniform01(rng);
        return {r * std::cos(t), r * std::sin(t)};
    }
    const double x = field.side * uniform01(rng) - 0.5 * cell_width;
    const double y = field.side * uniform01(rng) - 0.5 * cell_height;
    return {x, y};
}

McEstimate summarize(const std::vector<double>& values) {
    McEstimate e;
    e.samples = static_cast<long>(values.size());
    if (values.empty()) return e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - e.mean) * (v - e.mean);
        e.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
    }
    return e;
}

std::vector<double> mc_farthest_distances(const CellRegion& cell, const FieldSpec& field, const McConfig& mc) {
    mc.validate();
    field.validate();
    const auto [w, h] = cell_extent(cell);
    std::vector<double> out(static_cast<std::size_t>(mc.deployments), 0.0);
    parallel_for(mc.deployments, mc.threads, [&](long b, long e) {
        for (long j = b; j < e; ++j) {
            Rng rng = stream_rng(mc.seed, static_cast<std::uint64_t>(j));
            double far = 0.0;
            for (int u = 0; u < field.num_users; ++u) {
                const Vec2 p = sample_field_point(field, rng, w, h);
                if (cell.contains(p, 0.0)) far = std::max(far, norm(p - cell.bs));
            }
            out[static_cast<std::size_t>(j)] = far;
        }
    });
    return out;
}

McEstimate collapsed_coverage(const std::vector<double>& farthest, const ChannelParams& ch, double tx_power) {
    const double scale = ch.noise_threshold() / tx_power;
    std::vector<double> v;
    v.reserve(farthest.size());
    for (double r : farthest) v.push_back(std::exp(-scale * std::pow(r, ch.path_loss_exp)));
    return summarize(v);
}

McEstimate mc_coverage_far(const CellRegion& cell, const FieldSpec& field, const ChannelParams& ch,
                           double tx_power, const McConfig& mc, FadingMode mode) {
    if (!(tx_power > 0.0)) throw std::invalid_argument("P_t must be positive");
    const std::vector<double> far = mc_farthest_distances(cell, field, mc);
    if (mode == FadingMode::Collapsed) return collapsed_coverage(far, ch, tx_power);
    std::vector<double> frac(far.size(), 1.0);
    parallel_for(static_cast<long>(far.size()), mc.threads, [&](long b, long e) {
        for (long j = b; j < e; ++j) {
            const double r = far[static_cast<std::size_t>(j)];
            if (r <= 0.0) continue;
            // Separate stream from the user drop of the same deployment.
            Rng rng = stream_rng(mc.seed ^ 0xfad1f00dULL, static_cast<std::uint64_t>(j));
            std::exponential_distribution<double> gain(1.0);
            const double need = ch.noise_threshold() * std::pow(r, ch.path_loss_exp) / tx_power;
            long ok = 0;
            for (long i = 0; i < mc.fading_draws; ++i) ok += gain(rng) >= need;
            frac[static_cast<std::size_t>(j)] = static_cast<double>(ok) / static_cast<double>(mc.fading_draws);
        }
    });
    return summarize(frac);
}

McEstimate mc_coverage_far(const RadialLayout& layout, int cell_index, const FieldSpec& field,
                           const ChannelParams& ch, double tx_power, const McConfig& mc, FadingMode mode) {
    const auto cells = build_cells(layout, field.radius);
    return mc_coverage_far(cells.at(static_cast<std::size_t>(cell_index)), field, ch, tx_power, mc, mode);
}

std::vector<double> mc_cell_distances(const CellRegion& cell, long n, std::uint64_t seed) {
    Rng rng = stream_rng(seed, 0);
    const CellSamples s = sample_cell_points(cell, static_cast<int>(n), rng);
    std::vector<double> out;
    out.reserve(s.points.size());
    for (const Vec2& p : s.points) out.push_back(norm(p - cell.bs));
    return out;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("empirical CDF of no samples");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::dkw_band(double alpha) const {
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(sorted_.size())));
}

double EmpiricalCdf::ks_distance(const std::function<double(double)>& cdf) const {
    const double n = static_cast<double>(sorted_.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted_.size()) {
        const double x = sorted_[i];
        std::size_t j = i;
        while (j < sorted_.size() && sorted_[j] == x) ++j;
        const double f = cdf(x);
        const double f_left = x <= 0.0 ? 0.0 : f;
        d = std::max(d, std::abs(static_cast<double>(j) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f_left));
        i = j;
    }
    return d;
}

EmpiricalCdf mc_distance_cdf(std::vector<double> samples) { return EmpiricalCdf(std::move(samples)); }

ActualLocation actual_optimal_location(int cell_index, const RadialLayout& layout, const FieldSpec& field,
                                       const ChannelParams& ch, const CostModel& cm, double epsilon,
                                       const McConfig& mc, const ActualLocationOptions& opts) {
    if (field.shape != FieldShape::Circular) throw std::invalid_argument("radial layout needs a circular field");
    if (opts.grid_points < 1) throw std::invalid_argument("grid needs at least one point");
    mc.validate();
    const auto idx = static_cast<std::size_t>(cell_index);
    if (idx >= layout.distances.size()) throw std::out_of_range("cell index outside layout");
    const double radius = field.radius;
    const double alpha = ch.path_loss_exp;

    ActualLocation out;
    out.fixed_distance = layout.distances[idx];
    const auto fixed_cells = build_cells(layout, radius);
    {
        const CellRegion& c = fixed_cells[idx];
        const auto base = std::make_shared<const CellDistanceDistribution>(c);
        const FarthestUEDistribution dist(base, field.num_users, c.area / field.area());
        out.q = realm_width_q(dist, opts.psi);
    }
    const double half_width = out.q * layout.farthest.at(idx);

    // Candidate layouts; the fixed placement comes first.
    std::vector<double> positions{out.fixed_distance};
    std::vector<std::vector<CellRegion>> candidates{fixed_cells};
    const bool central = layout.sectoring.family == SectoringFamily::MKPlus1 && idx == 0;
    if (!central && half_width > 0.0) {
        for (int g = 0; g < opts.grid_points; ++g) {
            const double t = opts.grid_points == 1 ? 0.0 : -1.0 + 2.0 * g / (opts.grid_points - 1);
            const double d = out.fixed_distance + t * half_width;
            if (t == 0.0 || d < 0.0 || d > radius) continue;
            std::vector<double> dist = layout.distances;
            dist[idx] = d;
            try {
                RadialLayout moved = make_layout(layout.sectoring, dist, radius);
                candidates.push_back(build_cells(moved, radius));
                positions.push_back(d);
            } catch (const std::exception&) {
                continue;  // placement leaves some cell empty or misordered
            }
        }
    }

    const std::size_t nc = candidates.size();
    const std::size_t ncell = fixed_cells.size();
    const auto n = static_cast<std::size_t>(mc.deployments);
    // moments[c][cell][j] = r_far^alpha of deployment j.
    std::vector<std::vector<std::vector<double>>> moments(
        nc, std::vector<std::vector<double>>(ncell, std::vector<double>(n, 0.0)));
    parallel_for(mc.deployments, mc.threads, [&](long b, long e) {
        std::vector<Vec2> users(static_cast<std::size_t>(field.num_users));
        for (long j = b; j < e; ++j) {
            Rng rng = stream_rng(mc.seed, static_cast<std::uint64_t>(j));
            for (Vec2& u : users) u = sample_field_point(field, rng);
            for (std::size_t c = 0; c < nc; ++c) {
                for (std::size_t k = 0; k < ncell; ++k) {
                    const CellRegion& cell = candidates[c][k];
                    double far = 0.0;
                    for (const Vec2& u : users) {
                        if (cell.contains(u, 0.0)) far = std::max(far, norm(u - cell.bs));
                    }
                    moments[c][k][static_cast<std::size_t>(j)] = std::pow(far, alpha);
                }
            }
        }
    });

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    std::size_t best = 0;
    double best_mean = mean_of(moments[0][idx]);
    for (std::size_t c = 1; c < nc; ++c) {
        const double m = mean_of(moments[c][idx]);
        if (m < best_mean) {
            best = c;
            best_mean = m;
        }
    }
    out.moment_fixed = mean_of(moments[0][idx]);
    if (best != 0) {
        std::vector<double> diff(n);
        for (std::size_t j = 0; j < n; ++j) diff[j] = moments[best][idx][j] - moments[0][idx][j];
        const McEstimate d = summarize(diff);
        out.moment_diff_se = d.std_error;
        if (!(d.mean < -opts.z_score * d.std_error)) best = 0;
    }
    out.actual_distance = positions[best];
    out.displacement = out.actual_distance - out.fixed_distance;
    out.moment_actual = mean_of(moments[best][idx]);

    const double c_b = ch.noise_threshold() / epsilon;
    auto network_cost = [&](std::size_t c) {
        double worst = 0.0;
        for (std::size_t k = 0; k < ncell; ++k) worst = std::max(worst, mean_of(moments[c][k]));
        return total_cost(layout.num_bs(), c_b * worst, cm);
    };
    out.cost_fixed = network_cost(0);
    out.cost_delta = network_cost(best) - out.cost_fixed;
    return out;
}

}  // namespace bsdeploy
