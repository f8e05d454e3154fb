#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "svardisc/types.hpp"

namespace svardisc {

enum class FuncTag { kLinear, kSin, kTanh, kSqrt };
enum class NoiseTag { kUniform, kGauss, kExp, kGamma };

std::string to_string(FuncTag t);
std::string to_string(NoiseTag t);
FuncTag func_tag_from_string(const std::string& s);
NoiseTag noise_tag_from_string(const std::string& s);

struct EdgeMech {
    FuncTag fn = FuncTag::kLinear;
    double weight = 0.0;
    friend bool operator==(const EdgeMech&, const EdgeMech&) = default;
};

struct NoiseSpec {
    NoiseTag tag = NoiseTag::kGauss;
    double scale = 1.0;  // multiplies a zero-mean unit-variance draw
    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

// Structural functions and noises for one summary graph: one (function,
// weight) per edge including self loops, one noise family per variable.
struct MechanismSpec {
    std::map<Edge, EdgeMech> edge;   // key (parent, child); self loops keyed (i, i)
    std::vector<NoiseSpec> noise;    // indexed by variable

    // Every graph edge and self loop must carry a mechanism with |w| >= w_min.
    void validate_covers(const SummaryGraph& g, double w_min = 0.05) const;

    // Stability retry support: scales every edge weight in place.
    void scale_weights(double factor);

    friend bool operator==(const MechanismSpec&, const MechanismSpec&) = default;
};

struct MechanismMenus {
    std::vector<FuncTag> functions{FuncTag::kLinear, FuncTag::kSin, FuncTag::kTanh, FuncTag::kSqrt};
    std::vector<NoiseTag> noises{NoiseTag::kUniform, NoiseTag::kGauss, NoiseTag::kExp,
                                 NoiseTag::kGamma};
    // Self-causation draws fall back to `functions` when this is empty.  The
    // proxy machinery needs an injective mediator-to-proxy link, so
    // calibration setups restrict self loops to the monotone menu.
    std::vector<FuncTag> self_functions{};
};

// Per-edge draws: function uniform from the menu; cross weights uniform from
// +-[0.3, 0.8]; linear self-loop weights clamped to [0.3, 0.7] so the series
// stays stationary.  Noise families uniform from the menu at unit scale.
MechanismSpec sample_mechanisms(const SummaryGraph& g, std::uint64_t seed,
                                const MechanismMenus& menus = {});

double apply_mechanism(const EdgeMech& m, double x);

// Zero-mean unit-variance draw scaled by spec.scale:
//   uniform on [-sqrt(3), sqrt(3)], standard normal, Exp(1)-1,
//   Gamma(2, 1/sqrt(2)) - sqrt(2).
double draw_noise(const NoiseSpec& spec, std::mt19937_64& rng);

std::string write_mechanism_spec(const MechanismSpec& spec, const std::vector<std::string>& names);
MechanismSpec read_mechanism_spec(const std::string& text, const std::vector<std::string>& names);

}  // namespace svardisc
