#include "synthrisk/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "synthrisk/rng.hpp"

namespace synthrisk {
namespace {

std::size_t draw_weighted(const std::vector<double>& w, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double total = 0.0;
    for (double x : w) total += x;
    double r = u(rng) * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
        r -= w[i];
        if (r <= 0.0) return i;
    }
    return w.size() - 1;
}

}  // namespace

Dataset make_mini_adult(std::size_t n_rows, std::uint64_t seed) {
    Schema schema({
        {"age", AttrKind::Numeric, {}, {}, {}},
        {"workclass", AttrKind::Categorical, {}, {}, {"Private", "Self-emp", "Gov", "Unemployed"}},
        {"education", AttrKind::Categorical, {}, {},
         {"Primary", "HS-grad", "Some-college", "Bachelors", "Masters", "Doctorate"}},
        {"marital_status", AttrKind::Categorical, {}, {},
         {"Married", "Never-married", "Divorced", "Widowed"}},
        {"sex", AttrKind::Categorical, {}, {}, {"Male", "Female"}},
        {"hours_per_week", AttrKind::Numeric, {}, {}, {}},
        {"capital_gain", AttrKind::Numeric, {}, {}, {}},
        {"income", AttrKind::Categorical, {}, {}, {"<=50K", ">50K"}},
    });

    auto rng = make_rng(derive_seed(seed, "mini-adult"));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Dataset out(schema, {});
    std::vector<Cell> row(schema.size());
    for (std::size_t i = 0; i < n_rows; ++i) {
        const std::size_t edu = draw_weighted({0.08, 0.30, 0.22, 0.22, 0.12, 0.06}, rng);

        double age = 22.0 + 2.2 * static_cast<double>(edu) + 14.0 * std::abs(gauss(rng)) +
                     10.0 * u(rng);
        age = std::clamp(std::round(age), 17.0, 90.0);

        // Workclass leans on education; a small unemployed tail.
        std::vector<double> wc = {0.62, 0.10 + 0.03 * edu, 0.10 + 0.04 * edu, 0.07};
        const std::size_t workclass = draw_weighted(wc, rng);

        std::vector<double> ms;
        if (age < 28)
            ms = {0.25, 0.62, 0.10, 0.03};
        else if (age < 50)
            ms = {0.58, 0.20, 0.18, 0.04};
        else
            ms = {0.60, 0.08, 0.18, 0.14};
        const std::size_t marital = draw_weighted(ms, rng);

        const std::size_t sex = u(rng) < 0.52 ? 0 : 1;

        double hours;
        if (workclass == 3)
            hours = 4.0 + 14.0 * u(rng);
        else
            hours = 40.0 + 3.0 * static_cast<double>(edu) + 9.0 * gauss(rng);
        hours = std::clamp(hours, 1.0, 99.0);

        double gain = 0.0;
        if (u(rng) < 0.10) gain = std::exp(7.5 + 1.4 * gauss(rng));  // heavy-tailed minority
        gain = std::min(gain, 99999.0);

        // Income is close to a deterministic function of the other attributes.
        const double z = 1.3 * (static_cast<double>(edu) - 2.4) + 0.055 * (age - 40.0) +
                         0.055 * (hours - 42.0) + 1.1 * (marital == 0) +
                         0.5 * (workclass == 1) - 1.6 * (workclass == 3) +
                         0.4 * (sex == 0) + 2.0 * (gain > 4000.0) + 0.45 * gauss(rng);
        const std::size_t income = z > 1.1 ? 1 : 0;

        row[0] = age;
        row[1] = static_cast<Cell>(workclass);
        row[2] = static_cast<Cell>(edu);
        row[3] = static_cast<Cell>(marital);
        row[4] = static_cast<Cell>(sex);
        row[5] = hours;
        row[6] = gain;
        row[7] = static_cast<Cell>(income);
        out.append_row(row);
    }
    return out;
}

}  // namespace synthrisk
