#ifndef SAEGT_CONFIG_HPP_
#define SAEGT_CONFIG_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "saegt/geom2d.hpp"
#include "saegt/gp_map.hpp"

namespace saegt {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Everything an episode needs. beta, lipschitz, safety_threshold and the
// start disk carry no defaults and must be present in the file. Optional
// geometry and navigator scales default to multiples of the terrain
// resolution, resolved when the episode starts.
struct RunConfig {
    std::string terrain_path;
    std::uint64_t seed = 0;
    int max_iterations = 500;
    int bootstrap_samples = 5;

    double beta = nan_;
    double lipschitz = nan_;
    double safety_threshold = nan_;

    Vec2 start_center{nan_, nan_};
    double start_radius = nan_;
    std::optional<Vec2> goal;
    int top_n = 10;

    Hyperparams gp;
    std::optional<double> noise_sd;  // defaults to sqrt(gp.noise_variance)

    std::optional<double> cluster_radius;     // default 1.5 x resolution
    std::optional<double> edge_threshold;     // default 3 x resolution
    std::optional<double> workspace_margin;   // default 2 x resolution
    std::optional<double> snap_quantum;       // default 1e-9 x resolution
    std::optional<double> degenerate_buffer;  // default 0.5 x resolution

    std::optional<double> sensing_radius;     // default 5 x resolution
    std::optional<double> arrival_tolerance;  // default 0.5 x resolution
    std::optional<double> max_step;           // default 0.5 x resolution
    int stall_window = 50;
    double stall_progress_factor = 0.01;
    int max_leg_ticks = 100000;

    int snapshot_every = 10;

    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

private:
    static constexpr double nan_ = std::numeric_limits<double>::quiet_NaN();
};

// "key = value" per line, '#' comments, dotted section prefixes
// (gp.length_scale, start.x, ...). Unknown keys are errors.
RunConfig parse_config(std::string_view text, const std::string& source_name);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

// Applies one "key=value" pair on top of a loaded config.
void apply_override(RunConfig& config, std::string_view assignment);

}  // namespace saegt

#endif  // SAEGT_CONFIG_HPP_
