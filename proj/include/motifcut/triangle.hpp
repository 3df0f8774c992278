#pragma once

#include <Eigen/Dense>
#include <vector>

#include "motifcut/weighted_graph.hpp"

namespace motifcut {

// Triangle-motif adjacency: entry (i, j) is the total weight of triangles
// through the pair, sum over s of w_ij * w_is * w_js, with zero diagonal.
struct MotifAdjacency {
    int n{0};
    Eigen::MatrixXd a;
};

// Partial derivative of the motif adjacency with respect to one pair weight
// w_{k,l}.  Nonzero only in rows/columns k and l:
//   (k,l): sum over s of w_ks * w_sl
//   (k,j): w_kj * w_jl  and  (l,j): w_lj * w_jk   for j outside {k,l}.
// The motif adjacency is multilinear in the pair weights, so this matrix is
// exact: A(w + h*e_kl) - A(w) = h * D for any h.
struct DerivativeMatrix {
    int n{0};
    int k{0};
    int l{0};
    Eigen::MatrixXd d;
};

// Raw variants operate on a bare pair-indexed vector (possibly signed); the
// graph-facing overloads validate nonnegativity first.
Eigen::MatrixXd triangle_adjacency_raw(int n, const Eigen::Ref<const Eigen::VectorXd>& w);
MotifAdjacency triangle_adjacency(const WeightedGraph& g);

Eigen::MatrixXd triangle_derivative_raw(int n, const Eigen::Ref<const Eigen::VectorXd>& w, int k,
                                        int l);
DerivativeMatrix triangle_derivative(const WeightedGraph& g, int k, int l);

// Cut value for a bipartition (S, V \ S) through the motif adjacency,
// (1/2) * 1_S' A 1_{V\S}.  S given as a sorted-or-not list of vertices.
double triangle_cut_bipartition(const WeightedGraph& g, const std::vector<int>& s);
double cut_value_from_adjacency(const Eigen::MatrixXd& a, const std::vector<bool>& in_s);

// General (S, T) cut by direct triple enumeration: a triangle contributes
// its weight once when its corners touch both S and T.  Cross-checks the
// matrix identity in tests; O(n^3) per query.
double triangle_cut_general(const WeightedGraph& g, const CutSpec& cut);

// Local l3 sensitivity: max over pairs (i, j) of sum over s of w_is * w_js.
double local_sensitivity_l3(const WeightedGraph& g);
double local_sensitivity_l3_raw(int n, const Eigen::Ref<const Eigen::VectorXd>& w);

// Cap-derived coarse bounds used by the calibration:
//   u_triangle = max over (i,j) of sum over s of
//                u_ij*u_is + u_is*u_js + u_js*u_ij
//   u_lambda   = max over (i,j) of sum over s of (u_is + u_js)
struct UQuantities {
    double u_triangle{0.0};
    double u_lambda{0.0};
};

UQuantities u_quantities(int n, const Eigen::Ref<const Eigen::VectorXd>& u);

// Per-pair wedge sums q_{(i,j)} = sum over s of (u_is + u_js); the saddle
// regularizer coefficient is 3*q and the gradient uses 6*q.
Eigen::VectorXd wedge_sums(int n, const Eigen::Ref<const Eigen::VectorXd>& u);

// Total triangle weight, sum over i<j<k of w_ij * w_ik * w_jk.
double total_triangle_weight(const WeightedGraph& g);

}  // namespace motifcut
