#include "nlsplit/schemes.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace nlsplit {

double SplittingScheme::sum_a() const {
    double s = 0.0;
    for (const auto& st : stages)
        s += st.a;
    return s;
}

double SplittingScheme::sum_b() const {
    double s = 0.0;
    for (const auto& st : stages)
        s += st.b;
    return s;
}

SplittingScheme strang() {
    return {"strang", 2, {{0.5, 1.0}, {0.5, 0.0}}};
}

SplittingScheme forest_ruth() {
    const double s = 1.0 / (2.0 - std::cbrt(2.0));
    return {"forest-ruth", 4,
            {{s / 2.0, s}, {(1.0 - s) / 2.0, 1.0 - 2.0 * s}, {(1.0 - s) / 2.0, s}, {s / 2.0, 0.0}}};
}

namespace {

// Unrolled alternating factor sequence; 'A' = kinetic, 'B' = potential,
// first-acting factor first. Exact zeros are dropped.
using Factors = std::vector<std::pair<char, double>>;

Factors unroll(const SplittingScheme& scheme, double scale = 1.0) {
    Factors f;
    for (const auto& st : scheme.stages) {
        if (st.a != 0.0)
            f.emplace_back('A', st.a * scale);
        if (st.b != 0.0)
            f.emplace_back('B', st.b * scale);
    }
    return f;
}

void merge_adjacent(Factors& f) {
    Factors out;
    for (const auto& [t, c] : f) {
        if (!out.empty() && out.back().first == t)
            out.back().second += c;
        else
            out.emplace_back(t, c);
    }
    f = std::move(out);
}

std::vector<SplitStage> pack(const Factors& f) {
    std::vector<SplitStage> stages;
    std::size_t i = 0;
    while (i < f.size()) {
        SplitStage st;
        if (f[i].first == 'A') {
            st.a = f[i].second;
            ++i;
        }
        if (i < f.size() && f[i].first == 'B') {
            st.b = f[i].second;
            ++i;
        }
        stages.push_back(st);
    }
    return stages;
}

}  // namespace

bool is_palindromic(const SplittingScheme& scheme, double tol) {
    const Factors f = unroll(scheme);
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n / 2 + 1 && i < n; ++i) {
        const auto& [ta, ca] = f[i];
        const auto& [tb, cb] = f[n - 1 - i];
        if (ta != tb || std::abs(ca - cb) > tol)
            return false;
    }
    return true;
}

SplittingScheme compose_higher_order(const SplittingScheme& base) {
    if (base.order % 2 != 0)
        throw std::invalid_argument("compose_higher_order: base order must be even, got " +
                                    std::to_string(base.order));
    if (!is_palindromic(base))
        throw std::invalid_argument("compose_higher_order: base scheme must be palindromic");
    if (base.order >= 8)
        throw std::invalid_argument(
            "compose_higher_order: orders beyond 8 are not generated (round-off dominates); "
            "base order " + std::to_string(base.order) + " refused");

    const double z1 = 1.0 / (2.0 - std::pow(2.0, 1.0 / (base.order + 1)));
    const double z0 = 1.0 - 2.0 * z1;

    Factors f;
    for (double z : {z1, z0, z1}) {
        Factors sub = unroll(base, z);
        f.insert(f.end(), sub.begin(), sub.end());
    }
    merge_adjacent(f);

    SplittingScheme out;
    out.order = base.order + 2;
    out.name = "order" + std::to_string(out.order);
    out.stages = pack(f);
    return out;
}

GradientScheme chin_gradient() {
    return GradientScheme{};
}

SplittingScheme scheme_by_name(const std::string& name) {
    if (name == "strang")
        return strang();
    if (name == "forest-ruth")
        return forest_ruth();
    if (name == "order6")
        return compose_higher_order(forest_ruth());
    if (name == "order8")
        return compose_higher_order(compose_higher_order(forest_ruth()));
    throw std::invalid_argument("unknown scheme '" + name +
                                "'; valid names: strang, forest-ruth, order6, order8, chin");
}

std::vector<std::string> scheme_names() {
    return {"strang", "forest-ruth", "order6", "order8", "chin"};
}

}  // namespace nlsplit
