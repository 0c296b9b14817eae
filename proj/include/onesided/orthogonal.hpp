#pragma once
#include <cmath>
#include <vector>

namespace onesided {

enum class GroupSide { Above, Below };

struct GroupDecision {
    GroupSide side;
    double objective;
};

// Exact minimizer of the empirical one-sided loss under an orthogonal design,
// solved per group (per basis direction): with l = sum_{y<=c}(c-y) and
// u = sum_{y>=c}(y-c), placing the group's coefficient above the cutoff costs l
// and below costs u; ties go Below.
inline std::vector<GroupDecision> orthogonal_exact_minimizer(
    const std::vector<std::vector<double>>& labels_per_group, double c) {
    std::vector<GroupDecision> out;
    out.reserve(labels_per_group.size());
    for (const auto& group : labels_per_group) {
        double below_mass = 0.0;  // l
        double above_mass = 0.0;  // u
        for (double y : group) {
            if (y <= c) below_mass += c - y;
            if (y >= c) above_mass += y - c;
        }
        if (below_mass < above_mass) {
            out.push_back({GroupSide::Above, below_mass});
        } else {
            out.push_back({GroupSide::Below, above_mass});
        }
    }
    return out;
}

}  // namespace onesided
