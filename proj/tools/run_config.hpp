#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsdeploy/distdist.hpp"
#include "bsdeploy/model.hpp"
#include "bsdeploy/sim.hpp"
#include "json.hpp"

namespace bsdeploy::cli {

// Malformed or out-of-range input; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    FieldSpec field;  // side defaults to radius * sqrt(pi)
    double threshold_db = -10.0;
    double noise_dbm = -70.0;
    double path_loss_exp = 4.0;
    CostModel cost;
    OptimizationLimits limits;
    McConfig mc;
    DensityMode density_mode = DensityMode::Moderate;

    RunConfig();

    ChannelParams channel() const;
    FieldSpec circular_field() const;
    FieldSpec square_field() const;
    // Throws ConfigError naming the offending value.
    void validate() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

DensityMode parse_density_mode(const std::string& s);
std::string density_mode_name(DensityMode m);
FieldShape parse_field_shape(const std::string& s);
std::string field_shape_name(FieldShape s);

// "a,b,c" lists values, "lo:hi:n" spaces n points linearly and
// "log:lo:hi:n" geometrically, endpoints included.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace bsdeploy::cli
