#include "run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace bsdeploy::cli {
namespace {

using nlohmann::json;

const json& object_at(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
    return v;
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> known) {
    const std::set<std::string> names(known.begin(), known.end());
    for (const auto& [k, v] : j.items()) {
        if (!names.contains(k)) throw ConfigError("unknown key '" + k + "' in " + where);
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    } else {
        if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    }
    out = v.get<T>();
}

std::string normalized(std::string s) {
    std::string out;
    for (char c : s) {
        if (c != '_' && c != '-') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

double to_double(const std::string& s, const std::string& spec) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + s + "' in grid '" + spec + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError("bad number '" + s + "' in grid '" + spec + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

}  // namespace

RunConfig::RunConfig() {
    field = FieldSpec::circular(500.0, 120);
    field.side = field.radius * std::sqrt(std::numbers::pi);
}

ChannelParams RunConfig::channel() const {
    ChannelParams ch;
    ch.threshold = db_to_linear(threshold_db);
    ch.noise_power = dbm_to_watts(noise_dbm);
    ch.path_loss_exp = path_loss_exp;
    return ch;
}

FieldSpec RunConfig::circular_field() const {
    FieldSpec f = field;
    f.shape = FieldShape::Circular;
    return f;
}

FieldSpec RunConfig::square_field() const {
    FieldSpec f = field;
    f.shape = FieldShape::Square;
    return f;
}

void RunConfig::validate() const {
    try {
        if (!std::isfinite(threshold_db)) throw std::invalid_argument("channel.threshold_db must be finite");
        if (!std::isfinite(noise_dbm)) throw std::invalid_argument("channel.noise_dbm must be finite");
        circular_field().validate();
        square_field().validate();
        channel().validate();
        cost.validate();
        limits.validate();
        mc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j, "config", {"field", "channel", "cost", "limits", "mc", "density_mode"});
    RunConfig cfg;
    try {
        if (j.contains("field")) {
            const json& f = object_at(j, "field");
            reject_unknown(f, "field", {"shape", "radius", "side", "num_users"});
            std::string shape = field_shape_name(cfg.field.shape);
            read(f, "shape", shape, "field");
            cfg.field.shape = parse_field_shape(shape);
            read(f, "radius", cfg.field.radius, "field");
            cfg.field.side = cfg.field.radius * std::sqrt(std::numbers::pi);
            read(f, "side", cfg.field.side, "field");
            read(f, "num_users", cfg.field.num_users, "field");
        }
        if (j.contains("channel")) {
            const json& c = object_at(j, "channel");
            reject_unknown(c, "channel", {"threshold_db", "noise_dbm", "path_loss_exp"});
            read(c, "threshold_db", cfg.threshold_db, "channel");
            read(c, "noise_dbm", cfg.noise_dbm, "channel");
            read(c, "path_loss_exp", cfg.path_loss_exp, "channel");
        }
        if (j.contains("cost")) {
            const json& c = object_at(j, "cost");
            reject_unknown(c, "cost", {"a_b", "b_b"});
            read(c, "a_b", cfg.cost.a_b, "cost");
            read(c, "b_b", cfg.cost.b_b, "cost");
        }
        if (j.contains("limits")) {
            const json& l = object_at(j, "limits");
            reject_unknown(l, "limits", {"max_bs", "max_power", "epsilon", "tolerance"});
            read(l, "max_bs", cfg.limits.max_bs, "limits");
            read(l, "max_power", cfg.limits.max_power, "limits");
            read(l, "epsilon", cfg.limits.epsilon, "limits");
            read(l, "tolerance", cfg.limits.tolerance, "limits");
        }
        if (j.contains("mc")) {
            const json& m = object_at(j, "mc");
            reject_unknown(m, "mc", {"deployments", "seed", "threads"});
            read(m, "deployments", cfg.mc.deployments, "mc");
            if (m.contains("seed")) {
                if (!m.at("seed").is_number_unsigned()) throw ConfigError("mc.seed must be a non-negative integer");
                cfg.mc.seed = m.at("seed").get<std::uint64_t>();
            }
            read(m, "threads", cfg.mc.threads, "mc");
        }
        if (j.contains("density_mode")) {
            std::string mode;
            read(j, "density_mode", mode, "config");
            cfg.density_mode = parse_density_mode(mode);
        }
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& cfg) {
    return json{
        {"field",
         {{"shape", field_shape_name(cfg.field.shape)},
          {"radius", cfg.field.radius},
          {"side", cfg.field.side},
          {"num_users", cfg.field.num_users}}},
        {"channel",
         {{"threshold_db", cfg.threshold_db}, {"noise_dbm", cfg.noise_dbm}, {"path_loss_exp", cfg.path_loss_exp}}},
        {"cost", {{"a_b", cfg.cost.a_b}, {"b_b", cfg.cost.b_b}}},
        {"limits",
         {{"max_bs", cfg.limits.max_bs},
          {"max_power", cfg.limits.max_power},
          {"epsilon", cfg.limits.epsilon},
          {"tolerance", cfg.limits.tolerance}}},
        {"mc", {{"deployments", cfg.mc.deployments}, {"seed", cfg.mc.seed}, {"threads", cfg.mc.threads}}},
        {"density_mode", density_mode_name(cfg.density_mode)},
    };
}

DensityMode parse_density_mode(const std::string& s) {
    const std::string n = normalized(s);
    if (n == "asymptotic") return DensityMode::Asymptotic;
    if (n == "moderate") return DensityMode::Moderate;
    throw ConfigError("density mode must be asymptotic or moderate, got '" + s + "'");
}

std::string density_mode_name(DensityMode m) {
    return m == DensityMode::Asymptotic ? "asymptotic" : "moderate";
}

FieldShape parse_field_shape(const std::string& s) {
    const std::string n = normalized(s);
    if (n == "circular") return FieldShape::Circular;
    if (n == "square") return FieldShape::Square;
    throw ConfigError("field shape must be circular or square, got '" + s + "'");
}

std::string field_shape_name(FieldShape s) {
    return s == FieldShape::Circular ? "circular" : "square";
}

std::vector<double> parse_grid(const std::string& spec) {
    if (spec.empty()) throw ConfigError("empty grid");
    if (spec.find(':') == std::string::npos) {
        std::vector<double> out;
        for (const std::string& part : split(spec, ',')) out.push_back(to_double(part, spec));
        return out;
    }
    std::vector<std::string> parts = split(spec, ':');
    const bool log = !parts.empty() && parts[0] == "log";
    if (log) parts.erase(parts.begin());
    if (parts.size() != 3) throw ConfigError("grid '" + spec + "' must be lo:hi:n or log:lo:hi:n");
    const double lo = to_double(parts[0], spec);
    const double hi = to_double(parts[1], spec);
    const double n_real = to_double(parts[2], spec);
    const int n = static_cast<int>(n_real);
    if (n < 1 || n != n_real) throw ConfigError("grid '" + spec + "' needs a positive integer count");
    if (log && !(lo > 0.0 && hi > 0.0)) throw ConfigError("log grid '" + spec + "' needs positive endpoints");
    if (n == 1) {
        if (lo != hi) throw ConfigError("grid '" + spec + "' with one point needs lo == hi");
        return {lo};
    }
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        out.push_back(log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace bsdeploy::cli
