#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace motifcut {

// Error taxonomy maps onto CLI exit codes: ConfigError -> 2, InputError -> 3,
// NumericError -> 4.  Anything else escaping to main is a bug.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexicographic indexing of vertex pairs (i, j), 0 <= i < j < n.  All weight
// vectors in the project are dense over this ordering, length n*(n-1)/2.
struct PairIndexer {
    int n{0};

    explicit PairIndexer(int n_) : n(n_) {
        if (n < 0) throw ConfigError("PairIndexer: negative vertex count");
    }

    std::int64_t count() const {
        return static_cast<std::int64_t>(n) * (n - 1) / 2;
    }

    std::int64_t index(int i, int j) const {
        if (i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw ConfigError("PairIndexer: invalid pair (" + std::to_string(i) + "," +
                              std::to_string(j) + ") for n=" + std::to_string(n));
        if (i > j) std::swap(i, j);
        // Offset of row i is i*n - i*(i+1)/2; column offset is j - i - 1.
        return static_cast<std::int64_t>(i) * n - static_cast<std::int64_t>(i) * (i + 1) / 2 +
               (j - i - 1);
    }

    std::pair<int, int> unpack(std::int64_t k) const {
        if (k < 0 || k >= count()) throw ConfigError("PairIndexer: index out of range");
        int i = 0;
        std::int64_t row = static_cast<std::int64_t>(n) - 1;
        while (k >= row) {
            k -= row;
            --row;
            ++i;
        }
        return {i, i + 1 + static_cast<int>(k)};
    }
};

}  // namespace motifcut
