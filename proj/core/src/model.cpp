#include "bsdeploy/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bsdeploy {

FieldSpec FieldSpec::circular(double radius, int num_users) {
    FieldSpec f;
    f.shape = FieldShape::Circular;
    f.radius = radius;
    f.num_users = num_users;
    f.validate();
    return f;
}

FieldSpec FieldSpec::square(double side, int num_users) {
    FieldSpec f;
    f.shape = FieldShape::Square;
    f.side = side;
    f.radius = 0.0;
    f.num_users = num_users;
    f.validate();
    return f;
}

FieldSpec FieldSpec::equal_area_square(double radius, int num_users) {
    return square(radius * std::sqrt(std::numbers::pi), num_users);
}

double FieldSpec::area() const {
    return shape == FieldShape::Circular ? std::numbers::pi * radius * radius : side * side;
}

void FieldSpec::validate() const {
    if (shape == FieldShape::Circular && !(radius > 0.0)) {
        throw std::invalid_argument("circular field requires radius > 0");
    }
    if (shape == FieldShape::Square && !(side > 0.0)) {
        throw std::invalid_argument("square field requires side > 0");
    }
    if (num_users < 1) {
        throw std::invalid_argument("field requires at least one user");
    }
}

void ChannelParams::validate() const {
    if (!(threshold > 0.0)) throw std::invalid_argument("SNR threshold must be > 0");
    if (!(noise_power > 0.0)) throw std::invalid_argument("noise power must be > 0");
    if (!(path_loss_exp >= 2.0)) throw std::invalid_argument("path-loss exponent must be >= 2");
}

void CostModel::validate() const {
    if (!(a_b > 0.0)) throw std::invalid_argument("a_B must be > 0");
    if (!(b_b >= 0.0)) throw std::invalid_argument("b_B must be >= 0");
}

void OptimizationLimits::validate() const {
    if (max_bs < 1) throw std::invalid_argument("N_B,max must be >= 1");
    if (!(max_power > 0.0)) throw std::invalid_argument("P_t,max must be > 0");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
    if (tolerance < 0) throw std::invalid_argument("golden-section tolerance must be >= 0");
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double dbm_to_watts(double x_dbm) { return std::pow(10.0, (x_dbm - 30.0) / 10.0); }

CostModel derive_linear_cost(int num_pa, double pa_efficiency, double signal_processing_power,
                             double overhead_factor) {
    if (num_pa < 1) throw std::invalid_argument("N_PA must be >= 1");
    if (!(pa_efficiency > 0.0 && pa_efficiency <= 1.0)) {
        throw std::invalid_argument("PA efficiency must lie in (0, 1]");
    }
    if (!(signal_processing_power >= 0.0)) throw std::invalid_argument("P_SP must be >= 0");
    if (!(overhead_factor >= 0.0)) throw std::invalid_argument("C_PCB must be >= 0");
    const double scale = num_pa * (1.0 + overhead_factor);
    return CostModel{scale / pa_efficiency, scale * signal_processing_power};
}

double total_cost(int num_bs, double tx_power, const CostModel& cost) {
    return num_bs * cost.per_bs(tx_power);
}

}  // namespace bsdeploy
