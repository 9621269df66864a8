#include "synthrisk/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace synthrisk {

namespace {
constexpr double kOneHotScale = 0.70710678118654752440;  // 1/sqrt(2)
}

ScalingParams ScalingParams::fit(const Dataset& data) {
    const auto& schema = data.schema();
    ScalingParams p;
    p.mins.assign(schema.size(), 0.0);
    p.maxs.assign(schema.size(), 0.0);
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (schema.at(a).kind != AttrKind::Numeric) continue;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t r = 0; r < data.n_rows(); ++r) {
            lo = std::min(lo, data.at(r, a));
            hi = std::max(hi, data.at(r, a));
        }
        if (data.n_rows() == 0) lo = hi = 0.0;
        if (schema.at(a).min) lo = std::min(lo, *schema.at(a).min);
        if (schema.at(a).max) hi = std::max(hi, *schema.at(a).max);
        p.mins[a] = lo;
        p.maxs[a] = hi;
    }
    return p;
}

std::string ScalingParams::to_json() const {
    nlohmann::json j;
    j["mins"] = mins;
    j["maxs"] = maxs;
    return j.dump();
}

ScalingParams ScalingParams::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    ScalingParams p;
    p.mins = j.at("mins").get<std::vector<double>>();
    p.maxs = j.at("maxs").get<std::vector<double>>();
    return p;
}

EmbeddedMatrix embed(const Dataset& data, const ScalingParams& params) {
    const auto& schema = data.schema();
    if (params.mins.size() != schema.size() || params.maxs.size() != schema.size())
        throw std::invalid_argument("embed: scaling params do not cover the schema");

    EmbeddedMatrix m;
    m.rows = data.n_rows();
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (schema.at(a).kind == AttrKind::Numeric) {
            m.column_map.push_back({a, -1});
        } else {
            const auto& vocab = schema.at(a).vocabulary;
            if (vocab.empty()) throw std::invalid_argument("embed: empty vocabulary");
            for (std::size_t l = 0; l < vocab.size(); ++l)
                m.column_map.push_back({a, static_cast<int>(l)});
        }
    }
    m.dims = m.column_map.size();
    m.params = params;
    m.data.assign(m.rows * m.dims, 0.0);

    for (std::size_t r = 0; r < m.rows; ++r) {
        double* out = m.data.data() + r * m.dims;
        std::size_t c = 0;
        for (std::size_t a = 0; a < schema.size(); ++a) {
            if (schema.at(a).kind == AttrKind::Numeric) {
                const double range = params.maxs[a] - params.mins[a];
                double v = 0.0;  // constant column maps to all-zeros
                if (range > 0.0) {
                    v = (data.at(r, a) - params.mins[a]) / range;
                    v = std::clamp(v, 0.0, 1.0);
                }
                out[c++] = v;
            } else {
                const auto n_levels = schema.at(a).vocabulary.size();
                const auto lvl = static_cast<std::size_t>(data.at(r, a));
                if (lvl >= n_levels) throw std::invalid_argument("embed: unknown category");
                out[c + lvl] = kOneHotScale;
                c += n_levels;
            }
        }
    }
    return m;
}

EmbeddedMatrix embed(const Dataset& data) { return embed(data, ScalingParams::fit(data)); }

}  // namespace synthrisk
