#include "motifcut/triangle.hpp"

namespace motifcut {

Eigen::MatrixXd triangle_adjacency_raw(int n, const Eigen::Ref<const Eigen::VectorXd>& w) {
    const Eigen::MatrixXd m = weight_matrix(n, w);
    // (m*m)(i,j) sums w_is * w_sj over all s; the s=i and s=j terms vanish
    // because the diagonal is zero, so the Hadamard product with m is exactly
    // the motif adjacency.
    Eigen::MatrixXd a = m.cwiseProduct(m * m);
    a.diagonal().setZero();
    return a;
}

MotifAdjacency triangle_adjacency(const WeightedGraph& g) {
    validate_nonnegative(g, "triangle_adjacency");
    return MotifAdjacency{g.n, triangle_adjacency_raw(g.n, g.weights())};
}

Eigen::MatrixXd triangle_derivative_raw(int n, const Eigen::Ref<const Eigen::VectorXd>& w, int k,
                                        int l) {
    PairIndexer px(n);
    px.index(k, l);  // validates the pair
    if (k > l) std::swap(k, l);
    const Eigen::MatrixXd m = weight_matrix(n, w);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    double common = 0.0;
    for (int s = 0; s < n; ++s) {
        if (s == k || s == l) continue;
        common += m(k, s) * m(s, l);
        d(k, s) = d(s, k) = m(k, s) * m(s, l);
        d(l, s) = d(s, l) = m(l, s) * m(s, k);
    }
    d(k, l) = d(l, k) = common;
    return d;
}

DerivativeMatrix triangle_derivative(const WeightedGraph& g, int k, int l) {
    validate_nonnegative(g, "triangle_derivative");
    if (k > l) std::swap(k, l);
    return DerivativeMatrix{g.n, k, l, triangle_derivative_raw(g.n, g.weights(), k, l)};
}

double cut_value_from_adjacency(const Eigen::MatrixXd& a, const std::vector<bool>& in_s) {
    const int n = static_cast<int>(a.rows());
    if (static_cast<int>(in_s.size()) != n)
        throw ConfigError("cut_value_from_adjacency: side mask length mismatch");
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!in_s[i]) continue;
        for (int j = 0; j < n; ++j)
            if (!in_s[j]) v += a(i, j);
    }
    return 0.5 * v;
}

double triangle_cut_bipartition(const WeightedGraph& g, const std::vector<int>& s) {
    validate_nonnegative(g, "triangle_cut_bipartition");
    if (s.empty()) throw InputError("triangle_cut_bipartition: empty side");
    std::vector<bool> in_s(g.n, false);
    for (int v : s) {
        if (v < 0 || v >= g.n)
            throw InputError("triangle_cut_bipartition: vertex " + std::to_string(v) + " out of range");
        if (in_s[v]) throw InputError("triangle_cut_bipartition: vertex repeated");
        in_s[v] = true;
    }
    if (static_cast<int>(s.size()) == g.n)
        throw InputError("triangle_cut_bipartition: side covers all vertices");
    return cut_value_from_adjacency(triangle_adjacency_raw(g.n, g.weights()), in_s);
}

double triangle_cut_general(const WeightedGraph& g, const CutSpec& cut) {
    validate_nonnegative(g, "triangle_cut_general");
    validate_cut(cut, g.n);
    // side: 0 = untouched, 1 = S, 2 = T
    std::vector<int> side(g.n, 0);
    for (int v : cut.s) side[v] = 1;
    for (int v : cut.t) side[v] = 2;
    const Eigen::MatrixXd m = weight_matrix(g.n, g.weights());
    double total = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            for (int k = j + 1; k < g.n; ++k) {
                const double tw = m(i, j) * m(i, k) * m(j, k);
                if (tw == 0.0) continue;
                // A triangle counts once when its corners touch both sides.
                const bool in_s = side[i] == 1 || side[j] == 1 || side[k] == 1;
                const bool in_t = side[i] == 2 || side[j] == 2 || side[k] == 2;
                if (in_s && in_t) total += tw;
            }
    return total;
}

double local_sensitivity_l3_raw(int n, const Eigen::Ref<const Eigen::VectorXd>& w) {
    if (n < 2) return 0.0;
    const Eigen::MatrixXd m = weight_matrix(n, w);
    const Eigen::MatrixXd c = m * m;  // (i,j) entry: sum over s of w_is * w_js
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) best = std::max(best, c(i, j));
    return best;
}

double local_sensitivity_l3(const WeightedGraph& g) {
    validate_nonnegative(g, "local_sensitivity_l3");
    return local_sensitivity_l3_raw(g.n, g.weights());
}

UQuantities u_quantities(int n, const Eigen::Ref<const Eigen::VectorXd>& u) {
    if (n < 3) return UQuantities{0.0, 0.0};
    const Eigen::MatrixXd m = weight_matrix(n, u);
    const Eigen::MatrixXd c = m * m;
    const Eigen::VectorXd r = m.rowwise().sum();
    UQuantities q;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double lam = r(i) + r(j) - 2.0 * m(i, j);
            const double tri = m(i, j) * lam + c(i, j);
            q.u_lambda = std::max(q.u_lambda, lam);
            q.u_triangle = std::max(q.u_triangle, tri);
        }
    return q;
}

Eigen::VectorXd wedge_sums(int n, const Eigen::Ref<const Eigen::VectorXd>& u) {
    PairIndexer px(n);
    if (u.size() != px.count()) throw ConfigError("wedge_sums: vector length mismatch");
    const Eigen::MatrixXd m = weight_matrix(n, u);
    const Eigen::VectorXd r = m.rowwise().sum();
    Eigen::VectorXd q(px.count());
    std::int64_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k) q(k) = r(i) + r(j) - 2.0 * m(i, j);
    return q;
}

double total_triangle_weight(const WeightedGraph& g) {
    validate_nonnegative(g, "total_triangle_weight");
    const Eigen::MatrixXd m = weight_matrix(g.n, g.weights());
    double total = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            for (int k = j + 1; k < g.n; ++k) total += m(i, j) * m(i, k) * m(j, k);
    return total;
}

}  // namespace motifcut
