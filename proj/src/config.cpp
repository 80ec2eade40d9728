#include "saegt/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "saegt/textio.hpp"

namespace saegt {

namespace {

struct Key {
    const char* name;
    bool required;
    std::function<void(RunConfig&, std::string_view, const std::string&)> set;
    // Returns the serialized value, or nullopt when the field is unset.
    std::function<std::optional<std::string>(const RunConfig&)> get;
};

[[noreturn]] void bad_value(const std::string& where, const char* key,
                            std::string_view value) {
    std::ostringstream msg;
    msg << where << ": bad value '" << value << "' for key '" << key << "'";
    throw ConfigError(msg.str());
}

double need_double(std::string_view v, const char* key, const std::string& where) {
    const auto d = parse_double(v);
    if (!d) bad_value(where, key, v);
    return *d;
}

long long need_int(std::string_view v, const char* key, const std::string& where) {
    const auto i = parse_int(v);
    if (!i) bad_value(where, key, v);
    return *i;
}

Key scalar(const char* name, bool required, double RunConfig::* field) {
    return {name, required,
            [name, field](RunConfig& c, std::string_view v, const std::string& w) {
                c.*field = need_double(v, name, w);
            },
            [field](const RunConfig& c) -> std::optional<std::string> {
                if (std::isnan(c.*field)) return std::nullopt;
                return fmt_g17(c.*field);
            }};
}

Key opt_scalar(const char* name, std::optional<double> RunConfig::* field) {
    return {name, false,
            [name, field](RunConfig& c, std::string_view v, const std::string& w) {
                c.*field = need_double(v, name, w);
            },
            [field](const RunConfig& c) -> std::optional<std::string> {
                if (!(c.*field)) return std::nullopt;
                return fmt_g17(*(c.*field));
            }};
}

Key integer(const char* name, int RunConfig::* field) {
    return {name, false,
            [name, field](RunConfig& c, std::string_view v, const std::string& w) {
                c.*field = static_cast<int>(need_int(v, name, w));
            },
            [field](const RunConfig& c) -> std::optional<std::string> {
                return std::to_string(c.*field);
            }};
}

Key gp_scalar(const char* name, double Hyperparams::* field) {
    return {name, false,
            [name, field](RunConfig& c, std::string_view v, const std::string& w) {
                c.gp.*field = need_double(v, name, w);
            },
            [field](const RunConfig& c) -> std::optional<std::string> {
                return fmt_g17(c.gp.*field);
            }};
}

const std::vector<Key>& key_table() {
    static const std::vector<Key> table = [] {
        std::vector<Key> t;
        t.push_back({"terrain", true,
                     [](RunConfig& c, std::string_view v, const std::string&) {
                         c.terrain_path = std::string(v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (c.terrain_path.empty()) return std::nullopt;
                         return c.terrain_path;
                     }});
        t.push_back({"seed", false,
                     [](RunConfig& c, std::string_view v, const std::string& w) {
                         c.seed = static_cast<std::uint64_t>(need_int(v, "seed", w));
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         return std::to_string(c.seed);
                     }});
        t.push_back(integer("max_iterations", &RunConfig::max_iterations));
        t.push_back(integer("bootstrap_samples", &RunConfig::bootstrap_samples));
        t.push_back(scalar("beta", true, &RunConfig::beta));
        t.push_back(scalar("lipschitz", true, &RunConfig::lipschitz));
        t.push_back(scalar("safety_threshold", true, &RunConfig::safety_threshold));
        t.push_back({"start.x", true,
                     [](RunConfig& c, std::string_view v, const std::string& w) {
                         c.start_center.x = need_double(v, "start.x", w);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (std::isnan(c.start_center.x)) return std::nullopt;
                         return fmt_g17(c.start_center.x);
                     }});
        t.push_back({"start.y", true,
                     [](RunConfig& c, std::string_view v, const std::string& w) {
                         c.start_center.y = need_double(v, "start.y", w);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (std::isnan(c.start_center.y)) return std::nullopt;
                         return fmt_g17(c.start_center.y);
                     }});
        t.push_back(scalar("start.radius", true, &RunConfig::start_radius));
        t.push_back({"goal.x", false,
                     [](RunConfig& c, std::string_view v, const std::string& w) {
                         if (!c.goal) c.goal = Vec2{0.0, 0.0};
                         c.goal->x = need_double(v, "goal.x", w);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (!c.goal) return std::nullopt;
                         return fmt_g17(c.goal->x);
                     }});
        t.push_back({"goal.y", false,
                     [](RunConfig& c, std::string_view v, const std::string& w) {
                         if (!c.goal) c.goal = Vec2{0.0, 0.0};
                         c.goal->y = need_double(v, "goal.y", w);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (!c.goal) return std::nullopt;
                         return fmt_g17(c.goal->y);
                     }});
        t.push_back(integer("planner.top_n", &RunConfig::top_n));
        t.push_back(gp_scalar("gp.signal_variance", &Hyperparams::signal_variance));
        t.push_back(gp_scalar("gp.length_scale", &Hyperparams::length_scale));
        t.push_back(gp_scalar("gp.noise_variance", &Hyperparams::noise_variance));
        t.push_back(gp_scalar("gp.jitter", &Hyperparams::jitter));
        t.push_back(gp_scalar("gp.prior_mean", &Hyperparams::prior_mean));
        t.push_back(opt_scalar("noise_sd", &RunConfig::noise_sd));
        t.push_back(opt_scalar("geometry.cluster_radius", &RunConfig::cluster_radius));
        t.push_back(opt_scalar("geometry.edge_threshold", &RunConfig::edge_threshold));
        t.push_back(opt_scalar("geometry.workspace_margin", &RunConfig::workspace_margin));
        t.push_back(opt_scalar("geometry.snap_quantum", &RunConfig::snap_quantum));
        t.push_back(
            opt_scalar("geometry.degenerate_buffer", &RunConfig::degenerate_buffer));
        t.push_back(opt_scalar("nav.sensing_radius", &RunConfig::sensing_radius));
        t.push_back(opt_scalar("nav.arrival_tolerance", &RunConfig::arrival_tolerance));
        t.push_back(opt_scalar("nav.max_step", &RunConfig::max_step));
        t.push_back(integer("nav.stall_window", &RunConfig::stall_window));
        t.push_back({"nav.stall_progress_factor", false,
                     [](RunConfig& c, std::string_view v, const std::string& w) {
                         c.stall_progress_factor =
                             need_double(v, "nav.stall_progress_factor", w);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         return fmt_g17(c.stall_progress_factor);
                     }});
        t.push_back(integer("nav.max_leg_ticks", &RunConfig::max_leg_ticks));
        t.push_back(integer("snapshots.every", &RunConfig::snapshot_every));
        return t;
    }();
    return table;
}

const Key* find_key(std::string_view name) {
    for (const Key& k : key_table()) {
        if (name == k.name) return &k;
    }
    return nullptr;
}

}  // namespace

void RunConfig::validate() const {
    const auto finite = [](double v, const char* what) {
        if (!std::isfinite(v))
            throw ConfigError(std::string("config: missing or non-finite ") + what);
    };
    if (terrain_path.empty()) throw ConfigError("config: missing terrain");
    finite(beta, "beta");
    finite(lipschitz, "lipschitz");
    finite(safety_threshold, "safety_threshold");
    finite(start_center.x, "start.x");
    finite(start_center.y, "start.y");
    finite(start_radius, "start.radius");
    if (beta < 0.0) throw ConfigError("config: beta must be >= 0");
    if (lipschitz < 0.0) throw ConfigError("config: lipschitz must be >= 0");
    if (!(start_radius > 0.0)) throw ConfigError("config: start.radius must be > 0");
    if (goal && !goal->finite()) throw ConfigError("config: non-finite goal");
    if (max_iterations < 1) throw ConfigError("config: max_iterations must be >= 1");
    if (bootstrap_samples < 1) throw ConfigError("config: bootstrap_samples must be >= 1");
    if (top_n < 1) throw ConfigError("config: planner.top_n must be >= 1");
    if (snapshot_every < 0) throw ConfigError("config: snapshots.every must be >= 0");
    if (noise_sd && !(*noise_sd >= 0.0))
        throw ConfigError("config: noise_sd must be >= 0");
    gp.validate();
    const std::pair<const std::optional<double>*, const char*> optionals[] = {
        {&cluster_radius, "geometry.cluster_radius"},
        {&edge_threshold, "geometry.edge_threshold"},
        {&workspace_margin, "geometry.workspace_margin"},
        {&snap_quantum, "geometry.snap_quantum"},
        {&degenerate_buffer, "geometry.degenerate_buffer"},
        {&sensing_radius, "nav.sensing_radius"},
        {&arrival_tolerance, "nav.arrival_tolerance"},
        {&max_step, "nav.max_step"},
    };
    for (const auto& [value, name] : optionals) {
        if (*value && !std::isfinite(**value))
            throw ConfigError(std::string("config: non-finite ") + name);
    }
}

RunConfig parse_config(std::string_view text, const std::string& source_name) {
    RunConfig config;
    std::set<std::string> seen;
    int lineno = 0;
    for (const auto raw_line : split(text, '\n')) {
        ++lineno;
        std::string_view line = raw_line;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        std::ostringstream where;
        where << source_name << ":" << lineno;
        if (eq == std::string_view::npos)
            throw ConfigError(where.str() + ": expected 'key = value'");
        const auto name = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const Key* key = find_key(name);
        if (!key)
            throw ConfigError(where.str() + ": unknown key '" + std::string(name) + "'");
        key->set(config, value, where.str());
        seen.insert(std::string(name));
    }
    for (const Key& k : key_table()) {
        if (k.required && !seen.count(k.name))
            throw ConfigError(source_name + ": missing required key '" +
                              std::string(k.name) + "'");
    }
    if (config.goal && (!seen.count("goal.x") || !seen.count("goal.y")))
        throw ConfigError(source_name + ": goal.x and goal.y must both be set");
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    for (const Key& k : key_table()) {
        if (const auto v = k.get(config)) out << k.name << " = " << *v << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void apply_override(RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("override must look like key=value: '" +
                          std::string(assignment) + "'");
    const auto name = trim(assignment.substr(0, eq));
    const auto value = trim(assignment.substr(eq + 1));
    const Key* key = find_key(name);
    if (!key) throw ConfigError("override: unknown key '" + std::string(name) + "'");
    key->set(config, value, "override " + std::string(name));
}

}  // namespace saegt
