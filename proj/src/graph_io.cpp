#include "motifcut/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace motifcut {

namespace {

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
    throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

int parse_int(const std::string& s, const std::string& source, int line) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail(source, line, "expected an integer, got '" + s + "'");
    return v;
}

double parse_weight(const std::string& s, const std::string& source, int line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail(source, line, "expected a weight, got '" + s + "'");
    return v;
}

void format_double(std::ostream& out, double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, ptr - buf);
    (void)ec;
}

}  // namespace

WeightedGraph parse_graph(std::istream& in, const std::string& source_name) {
    std::string line;
    int line_no = 0;

    // Header
    int n = -1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = strip(line);
        if (s.empty()) continue;
        if (s.rfind("n=", 0) != 0) fail(source_name, line_no, "expected header 'n=<int>'");
        n = parse_int(strip(s.substr(2)), source_name, line_no);
        if (n < 1) fail(source_name, line_no, "vertex count must be positive");
        break;
    }
    if (n < 0) throw InputError(source_name + ": empty input, expected header 'n=<int>'");

    WeightedGraph g(n);
    std::vector<bool> seen(g.w.size(), false);
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = strip(line);
        if (s.empty()) continue;
        const auto c1 = s.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            fail(source_name, line_no, "expected 'i,j,weight'");
        const int i = parse_int(strip(s.substr(0, c1)), source_name, line_no);
        const int j = parse_int(strip(s.substr(c1 + 1, c2 - c1 - 1)), source_name, line_no);
        const double w = parse_weight(strip(s.substr(c2 + 1)), source_name, line_no);
        if (i < 0 || j < 0 || i >= n || j >= n)
            fail(source_name, line_no, "pair (" + std::to_string(i) + "," + std::to_string(j) +
                                           ") out of range for n=" + std::to_string(n));
        if (i >= j) fail(source_name, line_no, "pairs must satisfy i < j");
        if (!std::isfinite(w)) fail(source_name, line_no, "non-finite weight");
        if (w < 0.0) fail(source_name, line_no, "negative weight");
        const auto k = static_cast<std::size_t>(g.pairs().index(i, j));
        if (seen[k])
            fail(source_name, line_no,
                 "duplicate pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
        seen[k] = true;
        g.w[k] = w;
    }
    return g;
}

WeightedGraph parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open for reading");
    return parse_graph(in, path);
}

void write_graph(const WeightedGraph& g, std::ostream& out) {
    out << "n=" << g.n << "\n";
    const PairIndexer px(g.n);
    for (std::int64_t k = 0; k < px.count(); ++k) {
        const double w = g.w[static_cast<std::size_t>(k)];
        if (w == 0.0) continue;
        const auto [i, j] = px.unpack(k);
        out << i << "," << j << ",";
        format_double(out, w);
        out << "\n";
    }
}

void write_graph_file(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError(path + ": cannot open for writing");
    write_graph(g, out);
    if (!out) throw InputError(path + ": write failed");
}

WeightedGraph gen_gnp(int n, double p, NoiseStream& stream) {
    if (n < 1) throw ConfigError("gen_gnp: vertex count must be positive");
    if (!(p >= 0.0) || !(p <= 1.0)) throw ConfigError("gen_gnp: p must lie in [0, 1]");
    WeightedGraph g(n);
    for (auto& w : g.w)
        if (stream.uniform01() < p) w = 1.0;
    return g;
}

WeightedGraph gen_complete(int n) {
    if (n < 1) throw ConfigError("gen_complete: vertex count must be positive");
    WeightedGraph g(n);
    std::fill(g.w.begin(), g.w.end(), 1.0);
    return g;
}

WeightedGraph gen_regular(int n, int degree, NoiseStream& stream) {
    if (n < 1) throw ConfigError("gen_regular: vertex count must be positive");
    if (degree < 0 || degree >= n)
        throw ConfigError("gen_regular: degree must lie in [0, n-1]");
    if ((static_cast<std::int64_t>(n) * degree) % 2 != 0)
        throw ConfigError("gen_regular: n * degree must be even");

    // Configuration model with rejection: shuffle the degree stubs, pair them
    // up, retry on self-loops or repeated pairs.
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * degree);
    for (int attempt = 0; attempt < 500; ++attempt) {
        stubs.clear();
        for (int v = 0; v < n; ++v)
            for (int k = 0; k < degree; ++k) stubs.push_back(v);
        for (std::size_t i = stubs.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(stream.uniform_bits() % i);
            std::swap(stubs[i - 1], stubs[j]);
        }
        WeightedGraph g(n);
        bool simple = true;
        for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
            const int a = stubs[i];
            const int b = stubs[i + 1];
            if (a == b || g.at(std::min(a, b), std::max(a, b)) != 0.0)
                simple = false;
            else
                g.at(std::min(a, b), std::max(a, b)) = 1.0;
        }
        if (simple) return g;
    }
    throw NumericError("gen_regular: no simple pairing found after 500 attempts");
}

}  // namespace motifcut
