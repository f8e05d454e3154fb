#include "svardisc/mechanism.hpp"

#include <cmath>
#include <sstream>

#include "svardisc/rng.hpp"

namespace svardisc {

std::string to_string(FuncTag t) {
    switch (t) {
        case FuncTag::kLinear: return "linear";
        case FuncTag::kSin: return "sin";
        case FuncTag::kTanh: return "tanh";
        case FuncTag::kSqrt: return "sqrt";
    }
    return "?";
}

std::string to_string(NoiseTag t) {
    switch (t) {
        case NoiseTag::kUniform: return "uniform";
        case NoiseTag::kGauss: return "gauss";
        case NoiseTag::kExp: return "exp";
        case NoiseTag::kGamma: return "gamma";
    }
    return "?";
}

FuncTag func_tag_from_string(const std::string& s) {
    if (s == "linear") return FuncTag::kLinear;
    if (s == "sin") return FuncTag::kSin;
    if (s == "tanh") return FuncTag::kTanh;
    if (s == "sqrt") return FuncTag::kSqrt;
    throw InvalidArgument("unknown function tag: " + s);
}

NoiseTag noise_tag_from_string(const std::string& s) {
    if (s == "uniform") return NoiseTag::kUniform;
    if (s == "gauss") return NoiseTag::kGauss;
    if (s == "exp") return NoiseTag::kExp;
    if (s == "gamma") return NoiseTag::kGamma;
    throw InvalidArgument("unknown noise tag: " + s);
}

void MechanismSpec::validate_covers(const SummaryGraph& g, double w_min) const {
    if (static_cast<int>(noise.size()) != g.d)
        throw InvalidArgument("MechanismSpec: noise list does not match vertex count");
    auto need = [&](Edge e) {
        auto it = edge.find(e);
        if (it == edge.end())
            throw InvalidArgument("MechanismSpec: missing mechanism for an edge");
        if (std::abs(it->second.weight) < w_min)
            throw InvalidArgument("MechanismSpec: edge weight below w_min");
    };
    for (const auto& e : g.edges) need(e);
    for (int i : g.self_loops) need({i, i});
}

void MechanismSpec::scale_weights(double factor) {
    for (auto& [e, m] : edge) m.weight *= factor;
}

MechanismSpec sample_mechanisms(const SummaryGraph& g, std::uint64_t seed,
                                const MechanismMenus& menus) {
    if (menus.functions.empty() || menus.noises.empty())
        throw InvalidArgument("sample_mechanisms: empty menu");
    auto rng = make_rng({seed, 0x6d65636873ull});
    MechanismSpec spec;
    const auto& self_menu = menus.self_functions.empty() ? menus.functions : menus.self_functions;
    auto draw_edge = [&](bool self_loop) {
        const auto& menu = self_loop ? self_menu : menus.functions;
        std::uniform_int_distribution<std::size_t> pick(0, menu.size() - 1);
        EdgeMech m;
        m.fn = menu[pick(rng)];
        std::uniform_real_distribution<double> mag(0.3, 0.8);
        std::uniform_real_distribution<double> sign01(0.0, 1.0);
        if (self_loop && m.fn == FuncTag::kLinear) {
            std::uniform_real_distribution<double> stable(0.3, 0.7);
            m.weight = stable(rng);
        } else {
            m.weight = mag(rng) * (sign01(rng) < 0.5 ? -1.0 : 1.0);
        }
        return m;
    };
    // Deterministic draw order: self loops by index, then cross edges sorted.
    for (int i : g.self_loops) spec.edge[{i, i}] = draw_edge(true);
    for (const auto& e : g.edges) spec.edge[e] = draw_edge(false);
    spec.noise.resize(g.d);
    for (int i = 0; i < g.d; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, menus.noises.size() - 1);
        spec.noise[i] = NoiseSpec{menus.noises[pick(rng)], 1.0};
    }
    return spec;
}

double apply_mechanism(const EdgeMech& m, double x) {
    switch (m.fn) {
        case FuncTag::kLinear: return m.weight * x;
        case FuncTag::kSin: return m.weight * std::sin(x);
        case FuncTag::kTanh: return m.weight * std::tanh(x);
        case FuncTag::kSqrt:
            // odd extension keeps the mechanism defined on all of R
            return m.weight * (x < 0 ? -std::sqrt(-x) : std::sqrt(x));
    }
    return 0.0;
}

double draw_noise(const NoiseSpec& spec, std::mt19937_64& rng) {
    double z = 0.0;
    switch (spec.tag) {
        case NoiseTag::kUniform: {
            std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
            z = u(rng);
            break;
        }
        case NoiseTag::kGauss: {
            std::normal_distribution<double> n(0.0, 1.0);
            z = n(rng);
            break;
        }
        case NoiseTag::kExp: {
            std::exponential_distribution<double> e(1.0);
            z = e(rng) - 1.0;
            break;
        }
        case NoiseTag::kGamma: {
            std::gamma_distribution<double> gdist(2.0, 1.0 / std::sqrt(2.0));
            z = gdist(rng) - std::sqrt(2.0);
            break;
        }
    }
    return spec.scale * z;
}

std::string write_mechanism_spec(const MechanismSpec& spec, const std::vector<std::string>& names) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& [e, m] : spec.edge)
        out << "mech " << names.at(e.first) << " -> " << names.at(e.second) << " "
            << to_string(m.fn) << " " << m.weight << "\n";
    for (std::size_t i = 0; i < spec.noise.size(); ++i)
        out << "noise " << names.at(i) << " " << to_string(spec.noise[i].tag) << " "
            << spec.noise[i].scale << "\n";
    return out.str();
}

MechanismSpec read_mechanism_spec(const std::string& text, const std::vector<std::string>& names) {
    auto index_of = [&](const std::string& name) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        throw InvalidArgument("mechanism spec: unknown variable " + name);
    };
    MechanismSpec spec;
    spec.noise.resize(names.size());
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "mech") {
            std::string a, arrow, b, fn;
            double w;
            ls >> a >> arrow >> b >> fn >> w;
            if (arrow != "->") throw InvalidArgument("mechanism spec: bad edge line");
            spec.edge[{index_of(a), index_of(b)}] = EdgeMech{func_tag_from_string(fn), w};
        } else if (kind == "noise") {
            std::string v, tag;
            double scale;
            ls >> v >> tag >> scale;
            spec.noise[index_of(v)] = NoiseSpec{noise_tag_from_string(tag), scale};
        } else if (!kind.empty() && kind[0] != '#') {
            throw InvalidArgument("mechanism spec: unknown line kind " + kind);
        }
    }
    return spec;
}

}  // namespace svardisc
