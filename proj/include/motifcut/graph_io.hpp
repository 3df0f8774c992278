#pragma once

#include <iosfwd>
#include <string>

#include "motifcut/noise.hpp"
#include "motifcut/weighted_graph.hpp"

namespace motifcut {

// Text format: a header line `n=<int>`, then one `i,j,weight` line per listed
// pair with 0 <= i < j < n.  Unlisted pairs are zero; duplicates, reversed or
// out-of-range indices, negative or non-finite weights, and malformed lines
// are input errors carrying the line number.
WeightedGraph parse_graph(std::istream& in, const std::string& source_name);
WeightedGraph parse_graph_file(const std::string& path);

// Writes the nonzero pairs with shortest round-trip decimals, so
// parse(write(g)) reproduces the weights bit for bit.
void write_graph(const WeightedGraph& g, std::ostream& out);
void write_graph_file(const WeightedGraph& g, const std::string& path);

// Unit-weight samplers.  gnp includes each pair independently; regular draws
// from the configuration model and retries until the graph is simple.
WeightedGraph gen_gnp(int n, double p, NoiseStream& stream);
WeightedGraph gen_complete(int n);
WeightedGraph gen_regular(int n, int degree, NoiseStream& stream);

}  // namespace motifcut
