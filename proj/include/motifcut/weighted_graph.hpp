#pragma once

#include <Eigen/Dense>
#include <vector>

#include "motifcut/common.hpp"

namespace motifcut {

// Undirected weighted graph on n vertices, stored as a dense vector over the
// lexicographic pair order of PairIndexer.  Proper graphs carry nonnegative
// finite weights; validate_nonnegative enforces that at the boundaries where
// it matters (parsing, generation, mechanism input).  The randomized-response
// baseline deliberately stores signed weights in the same container.
struct WeightedGraph {
    int n{0};
    std::vector<double> w;

    WeightedGraph() = default;
    explicit WeightedGraph(int n_) : n(n_), w(PairIndexer(n_).count(), 0.0) {}
    WeightedGraph(int n_, std::vector<double> w_) : n(n_), w(std::move(w_)) {
        if (static_cast<std::int64_t>(w.size()) != PairIndexer(n).count())
            throw ConfigError("WeightedGraph: weight vector length mismatch");
    }

    PairIndexer pairs() const { return PairIndexer(n); }

    double& at(int i, int j) { return w[pairs().index(i, j)]; }
    double at(int i, int j) const { return w[pairs().index(i, j)]; }

    Eigen::Map<const Eigen::VectorXd> weights() const {
        return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    }

    double total_weight() const { return weights().size() ? weights().sum() : 0.0; }
    double max_weight() const { return weights().size() ? weights().maxCoeff() : 0.0; }
};

// Throws InputError on negative or non-finite entries.
void validate_nonnegative(const WeightedGraph& g, const std::string& context);

// Symmetric n x n weight matrix with zero diagonal, and its inverse.
Eigen::MatrixXd weight_matrix(int n, const Eigen::Ref<const Eigen::VectorXd>& w);
Eigen::VectorXd weights_from_matrix(const Eigen::MatrixXd& m);

// Vertex bipartition or general disjoint (S, T) cut query.  Sides must be
// nonempty, disjoint, in-range, and duplicate-free.
struct CutSpec {
    std::vector<int> s;
    std::vector<int> t;
};

void validate_cut(const CutSpec& cut, int n);

}  // namespace motifcut
