#include "motifcut/weighted_graph.hpp"

#include <cmath>
#include <unordered_set>

namespace motifcut {

void validate_nonnegative(const WeightedGraph& g, const std::string& context) {
    PairIndexer px(g.n);
    if (static_cast<std::int64_t>(g.w.size()) != px.count())
        throw InputError(context + ": weight vector length mismatch");
    for (std::int64_t k = 0; k < px.count(); ++k) {
        const double v = g.w[static_cast<std::size_t>(k)];
        if (!std::isfinite(v)) {
            auto [i, j] = px.unpack(k);
            throw InputError(context + ": non-finite weight at pair (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
        }
        if (v < 0.0) {
            auto [i, j] = px.unpack(k);
            throw InputError(context + ": negative weight at pair (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
        }
    }
}

Eigen::MatrixXd weight_matrix(int n, const Eigen::Ref<const Eigen::VectorXd>& w) {
    PairIndexer px(n);
    if (w.size() != px.count()) throw ConfigError("weight_matrix: vector length mismatch");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    std::int64_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k) m(i, j) = m(j, i) = w(k);
    return m;
}

Eigen::VectorXd weights_from_matrix(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n) throw ConfigError("weights_from_matrix: not square");
    Eigen::VectorXd w(PairIndexer(n).count());
    std::int64_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k) w(k) = m(i, j);
    return w;
}

void validate_cut(const CutSpec& cut, int n) {
    if (cut.s.empty() || cut.t.empty()) throw InputError("cut: both sides must be nonempty");
    std::unordered_set<int> seen;
    for (const auto& side : {cut.s, cut.t}) {
        for (int v : side) {
            if (v < 0 || v >= n) throw InputError("cut: vertex " + std::to_string(v) + " out of range");
            if (!seen.insert(v).second)
                throw InputError("cut: vertex " + std::to_string(v) + " repeated or on both sides");
        }
    }
}

}  // namespace motifcut
