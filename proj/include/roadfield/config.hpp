#ifndef ROADFIELD_CONFIG_HPP
#define ROADFIELD_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "roadfield/model.hpp"
#include "roadfield/simulate.hpp"

namespace roadfield {

/// Inclusive linear range start..stop sampled at count points.
struct SweepRange {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    std::vector<double> values() const;
    bool operator==(const SweepRange&) const = default;
};

struct FieldSpec {
    std::string kind = "logistic";
    double r = 1.0;
    bool operator==(const FieldSpec&) const = default;
};

struct RoadSpec {
    std::string kind = "zero";  // zero | mortality | logistic
    double rho = 1.0;
    double slope = 1.0;
    double cap = 1.0;
    bool operator==(const RoadSpec&) const = default;
};

/// Parsed configuration: flat key = value sections [model], [field], [road],
/// [grid], [sweep] with '#' comments.  Unknown keys and out-of-range values
/// are ConfigErrors carrying the line number and key.
struct RunConfig {
    // [model]
    double d = 1.0;
    double D = 1.0;
    double mu = 1.0;
    double nu = 1.0;
    double q = 0.0;
    int direction = 1;

    FieldSpec field;
    RoadSpec road;

    // [grid]
    double Lx = 400.0;
    double Ly = 40.0;
    double dx = 0.25;
    double dy = 0.25;
    double dt = 0.0;  // 0 = stability bound
    double T = 150.0;
    double record_dt = 1.0;
    double level = 0.5;
    double fit_window = 0.5;
    double u0_amp = 1.0;
    double u0_halfwidth = 1.0;
    int threads = 0;
    std::vector<double> snapshots;

    // [sweep]
    std::optional<SweepRange> sweep_D;
    std::optional<SweepRange> sweep_q;
    std::optional<SweepRange> sweep_rho;
    unsigned long seed = 0;

    bool operator==(const RunConfig&) const = default;

    ModelParams make_params() const;
    FieldReaction make_field() const;
    RoadReaction make_road() const;
    GridSpec make_grid() const;
    SimSetup make_setup() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Canonical text form; parse(emit_config(c)) reproduces c exactly.
std::string emit_config(const RunConfig& c);

}  // namespace roadfield

#endif
