#include "vfl/example.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "vfl/parallel.hpp"

namespace vfl {

DerivedScales derive_parameters(const ExampleConfig& config) {
    const int n = config.n;
    if (n < 2) throw config_error("n >= 2", "example: surface dimension must be >= 2");
    if (config.p < 1.0 || config.p >= n)
        throw config_error("1 <= p < n", "example: curvature exponent must satisfy 1 <= p < n");
    for (double alpha : {config.alpha1, config.alpha2})
        if (!(alpha > 0.0) || alpha > 1.0)
            throw config_error("0 < alpha <= 1", "example: alpha must lie in (0, 1]");
    for (double q : {config.q1, config.q2})
        if (q < 1.0) throw config_error("q >= 1", "example: q must be >= 1");

    const double k1 = config.kappa1(), k2 = config.kappa2();
    if (k2 > k1)
        throw config_error("alpha2*q2 <= alpha1*q1",
                           "example: need alpha2*q2 <= alpha1*q1");
    // 1/p > 1 + (k2/k1)(1/n + 1/k2 - 1); for k1 = k2 this reads k2 > np/(n-p)
    double rhs = 1.0 + (k2 / k1) * (1.0 / n + 1.0 / k2 - 1.0);
    if (!(1.0 / config.p > rhs)) {
        if (k1 == k2) {
            std::ostringstream msg;
            msg << "example: need alpha2*q2 > n*p/(n-p) = " << n * config.p / (n - config.p);
            throw config_error("alpha2*q2 > n*p/(n-p)", msg.str());
        }
        throw config_error("1/p > 1 + (a2q2/a1q1)(1/n + 1/(a2q2) - 1)",
                           "example: curvature summability inequality violated");
    }
    if (config.weight_s.has_value() != config.weight_r.has_value())
        throw config_error("weight s, r", "example: weight exponents come as a pair");
    DerivedScales s;
    s.n = n;
    s.a = k2 / n + 1.0;
    s.b = (k1 - k2) / s.a + 1.0;
    s.max_level = config.max_level;
    if (config.weight_r) {
        double r = *config.weight_r, sw = *config.weight_s;
        if (!(r > 1.0)) throw config_error("r > 1", "example: weight r must be > 1");
        double lower = n + (1.0 - 1.0 / r) * k2;
        if (!(sw > lower)) {
            std::ostringstream msg;
            msg << "example: need s > n + (1 - 1/r)*alpha2*q2 = " << lower;
            throw config_error("s > n + (1-1/r)*alpha2*q2", msg.str());
        }
    }
    if (config.max_level < 0) throw config_error("J >= 0", "example: max_level must be >= 0");
    if (config.max_level > 40)
        throw capacity_error("example: truncation level beyond the supported range");
    return s;
}

double weight_value(const DerivedScales& scales, int level, double s) {
    if (level < 0) throw contract_error("weight_value: level must be >= 0");
    return std::exp2((scales.n * scales.a - s) * level);
}

double tail_ratio(const DerivedScales& scales) {
    return std::exp2(scales.n * (1.0 - scales.a));
}

bool placement_contained(const DerivedScales& scales) {
    for (int j = 0; j <= scales.max_level; ++j) {
        double cell = std::exp2(-j - 2.0);
        if (scales.rho(j) > cell * (1.0 + 1e-12)) return false;
        if (scales.sigma(j) > cell * (1.0 + 1e-12)) return false;
    }
    return true;
}

struct ExampleVarifold::CloudCache {
    std::mutex mu;
    std::map<std::uint64_t, std::shared_ptr<const std::vector<SurfaceSample>>> by_tau;
};

std::shared_ptr<const std::vector<SurfaceSample>>
ExampleVarifold::unit_cloud(int level) const {
    const LevelAggregate& agg = levels_.at(static_cast<std::size_t>(level));
    std::uint64_t key;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&key, &agg.tau, sizeof(key));
    std::lock_guard<std::mutex> lock(clouds_->mu);
    auto it = clouds_->by_tau.find(key);
    if (it != clouds_->by_tau.end()) return it->second;
    ProfileGeometry geom{agg.tau, config_.n, config_.smoothing};
    auto cloud = std::make_shared<const std::vector<SurfaceSample>>(
        sample_surface(geom, cloud_size_, cloud_seed_));
    clouds_->by_tau.emplace(key, cloud);
    return cloud;
}

void ExampleVarifold::set_cloud(std::uint64_t seed, int size) {
    cloud_seed_ = seed;
    cloud_size_ = size;
    clouds_ = std::make_shared<CloudCache>();
}

double ExampleVarifold::bump_mass_in_window() const {
    double s = 0.0;
    for (const auto& lv : levels_) s += lv.cell_count * lv.cell_mass;
    return s;
}

namespace {

// cells of level j with center in the half-open window [c-H, c+H)^n; the
// count scales exactly by 2^n per level for dyadic-aligned windows
std::int64_t tiling_count(const Window& window, int j) {
    std::int64_t total = 1;
    for (int axis = 0; axis < window.dim(); ++axis) {
        Dyadic lo = (window.center[axis] - window.half_width).shifted(j + 1);
        Dyadic hi = (window.center[axis] + window.half_width).shifted(j + 1);
        std::int64_t cnt = dyadic_ceil(hi) - dyadic_ceil(lo);
        if (cnt <= 0) return 0;
        if (total > (std::int64_t{1} << 62) / cnt)
            throw capacity_error("build_example: window cell count");
        total *= cnt;
    }
    return total;
}

} // namespace

ExampleVarifold build_example(const ExampleConfig& config, bool parallel) {
    ExampleVarifold ex;
    ex.config_ = config;
    ex.scales_ = derive_parameters(config);
    ex.clouds_ = std::make_shared<ExampleVarifold::CloudCache>();
    if (!placement_contained(ex.scales_))
        throw contract_error("build_example: a surface would not fit its cell");

    const int n = config.n;
    Window window = Window::centered(n, config.window_half_width);
    ex.plane_mass_ = std::pow(2.0 * config.window_half_width.to_double(), n);

    const int J = config.max_level;
    ex.levels_.resize(static_cast<std::size_t>(J) + 1);
    auto body = [&](std::size_t idx) {
        int j = static_cast<int>(idx);
        LevelAggregate agg;
        agg.level = j;
        agg.cell_count = tiling_count(window, j);
        agg.cell_scale = ex.scales_.cell_scale(j);
        agg.y_center = ex.scales_.y_center(j);
        agg.tau = ex.scales_.tau(j);
        ProfileGeometry geom{agg.tau, n, config.smoothing};
        agg.unit = unit_integrals(geom, config.p, config.q1, PlaneNorm::frobenius, 1.0,
                                  config.quad);
        double sn = std::pow(agg.cell_scale, n);
        agg.cell_mass = sn * agg.unit.mass;
        agg.cell_curvature = std::pow(agg.cell_scale, n - config.p) * agg.unit.curvature_moment;
        agg.cell_tilt = sn * agg.unit.tilt_moment;
        agg.cell_height =
            sn * height_moment(geom, config.q2, agg.y_center, agg.cell_scale, config.quad);
        agg.weight = config.weight_s ? weight_value(ex.scales_, j, *config.weight_s) : 1.0;
        ex.levels_[idx] = std::move(agg);
    };
    if (parallel)
        parallel_for(ex.levels_.size(), body);
    else
        serial_for(ex.levels_.size(), body);
    return ex;
}

double tail_bound(const ExampleVarifold& ex, int i, int J) {
    if (J < i) throw contract_error("tail_bound: need J >= i");
    const DerivedScales& sc = ex.scales();
    const int n = sc.n;
    double r = tail_ratio(sc);
    if (!(r < 1.0)) throw contract_error("tail_bound: level ratio must be < 1");
    // omitted upper sum vs kept lower bound; the A(tau) spread over levels is
    // bounded by the built max/min (tau_j is nonincreasing in j)
    double a_max = 0.0, a_min = std::numeric_limits<double>::infinity();
    for (const auto& lv : ex.levels()) {
        a_max = std::max(a_max, lv.unit.mass);
        a_min = std::min(a_min, lv.unit.mass);
    }
    double geom = std::pow(r, J - i + 1) / (1.0 - r);
    return std::pow(5.0 / 3.0, n) * (a_max / a_min) * geom;
}

} // namespace vfl
