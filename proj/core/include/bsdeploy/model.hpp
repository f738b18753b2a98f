#pragma once

// Parameter records shared by every stage of the deployment optimizer.
// All quantities are linear SI: meters, watts, dimensionless ratios.

namespace bsdeploy {

enum class FieldShape { Circular, Square };

struct FieldSpec {
    FieldShape shape = FieldShape::Circular;
    double radius = 500.0;  // R, circular field
    double side = 0.0;      // a, square field
    int num_users = 120;    // N_U

    static FieldSpec circular(double radius, int num_users);
    static FieldSpec square(double side, int num_users);
    // Square with the same area as a disk of the given radius (a = R*sqrt(pi)).
    static FieldSpec equal_area_square(double radius, int num_users);

    double area() const;
    void validate() const;
};

struct ChannelParams {
    double threshold = 0.1;        // T, linear SNR threshold
    double noise_power = 1e-10;    // sigma^2, watts
    double path_loss_exp = 4.0;    // alpha

    // T * sigma^2, the factor every coverage expression scales by.
    double noise_threshold() const { return threshold * noise_power; }
    void validate() const;
};

// Per-BS power draw a_B * P_t + b_B.
struct CostModel {
    double a_b = 5.5;
    double b_b = 32.0;

    double per_bs(double tx_power) const { return a_b * tx_power + b_b; }
    void validate() const;
};

struct OptimizationLimits {
    int max_bs = 35;          // N_B,max
    double max_power = 5.0;   // P_t,max, watts
    double epsilon = 1e-3;    // coverage slack, C1 requires coverage >= 1 - epsilon
    int tolerance = 2;        // golden-section stopping width

    void validate() const;
};

double db_to_linear(double x_db);
double dbm_to_watts(double x_dbm);

// Collapses the per-component BS power model
//   P_BS = N_PA * (P_t / mu_PA + P_SP) * (1 + C_PCB)
// into the linear form a_B * P_t + b_B.
CostModel derive_linear_cost(int num_pa, double pa_efficiency, double signal_processing_power,
                             double overhead_factor);

double total_cost(int num_bs, double tx_power, const CostModel& cost);

}  // namespace bsdeploy
