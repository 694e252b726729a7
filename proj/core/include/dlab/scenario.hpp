#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dlab/darboux.hpp"
#include "dlab/grid.hpp"
#include "dlab/modes.hpp"
#include "dlab/oscillator.hpp"

namespace dlab::scenario {

using verify::cplx;
using verify::Grid1D;

/// Dense time sampling for space-time (heatmap) grids.
struct TimeRange {
    double t_start = 0.0;
    double t_stop = 25.2;
    int n_slices = 64;
};

/// One fully specified lab run: oscillator + Ermakov channel + trajectory,
/// optionally a Darboux section, plus grid/time/output choices.
struct Scenario {
    std::string name = "custom";
    classical::OscillatorParams oscillator;
    classical::ErmakovSpec ermakov;  // lambda resolved at parse time
    classical::TrajectorySpec trajectory;
    std::optional<darboux::DarbouxSpec> darboux;
    Grid1D grid{-20.0, 20.0, 2001};
    std::vector<double> times{0.2, 6.0};
    std::optional<TimeRange> time_range;
    std::vector<int> n_list;
    std::vector<cplx> z_list;
    std::string family = "psi";  // phi | psi | psi_tilde
    std::string output_dir = "out";

    classical::ValidatedModel model() const;
    modes::HermiteGaussBasis basis() const;
    dlab::darboux::DarbouxTransform transform() const;  // requires darboux section

    /// Slices used for space-time grids: time_range when set, else times.
    std::vector<double> slices() const;
};

/// Strict JSON parse: unknown keys anywhere are ConfigError.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Shipped figure presets fig1..fig8; each expands to one scenario per
/// trajectory. preset_command names the subcommand the bundle feeds.
std::vector<Scenario> preset(const std::string& name);
std::vector<std::string> preset_names();
std::string preset_command(const std::string& name);

/// Worker count for per-time-slice parallel evaluation (0 = hardware).
void set_thread_count(int n);
int thread_count();

/// Potential curves (one CSV per entry of `times`) plus a space-time map.
std::vector<std::filesystem::path> cmd_potential(
    const Scenario& sc, const std::filesystem::path& out_dir);

/// Per-n space-time density maps of |psi_n|^2 (or |phi_n|^2 when no
/// darboux section is present). Empty n_list falls back to the scenario's.
std::vector<std::filesystem::path> cmd_states(
    const Scenario& sc, const std::vector<int>& n_list,
    const std::filesystem::path& out_dir);

/// Space-time density maps per z for the chosen family.
std::vector<std::filesystem::path> cmd_coherent(
    const Scenario& sc, const std::vector<cplx>& z_list,
    const std::string& family, const std::filesystem::path& out_dir);

/// Verification battery outcome; implemented by the verify suite.
struct VerifyOutcome {
    bool pass = false;
    std::string text;  // human-readable report
    std::string json;  // machine-readable report
};
VerifyOutcome cmd_verify(const Scenario& sc, const std::string& suite);

}  // namespace dlab::scenario
