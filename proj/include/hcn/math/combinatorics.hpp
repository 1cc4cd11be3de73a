// SPDX-License-Identifier: Apache-2.0
//
// hcn -- coverage and rate analysis for multi-antenna cellular downlinks with
// residual transceiver hardware impairments, pilot contamination and channel
// aging over Poisson-distributed base stations.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hcn::math {

inline constexpr int kMaxBinomialN = 64;

/// Exact n-choose-k in integer arithmetic, n <= 64 (C(64,32) still fits in
/// 64 bits). k > n returns 0 by convention.
inline std::uint64_t binomial(int n, int k)
{
    if (n < 0 || k < 0 || n > kMaxBinomialN)
        throw std::invalid_argument("binomial: need 0 <= n <= 64 and k >= 0");
    if (k > n)
        return 0;

    struct PascalTable {
        std::array<std::array<std::uint64_t, kMaxBinomialN + 1>, kMaxBinomialN + 1> c{};
        PascalTable()
        {
            for (int i = 0; i <= kMaxBinomialN; ++i) {
                c[i][0] = 1;
                for (int j = 1; j <= i; ++j)
                    c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0);
            }
        }
    };
    static const PascalTable table;
    return table.c[n][k];
}

/// One ordered triple u1+u2+u3 = n together with its exact multinomial
/// coefficient n! / (u1! u2! u3!).
struct MultinomialIndex {
    int u1 = 0;
    int u2 = 0;
    int u3 = 0;
    std::uint64_t weight = 1;
};

/// All ordered triples (u1,u2,u3) with u1+u2+u3 = n. There are
/// (n+1)(n+2)/2 of them and the weights sum to 3^n.
inline std::vector<MultinomialIndex> enumerate_compositions(int n)
{
    if (n < 0 || n > 32)
        throw std::invalid_argument("enumerate_compositions: need 0 <= n <= 32");
    std::vector<MultinomialIndex> out;
    out.reserve(static_cast<std::size_t>((n + 1) * (n + 2) / 2));
    for (int u1 = 0; u1 <= n; ++u1) {
        for (int u2 = 0; u2 <= n - u1; ++u2) {
            const int u3 = n - u1 - u2;
            // n!/(u1! u2! u3!) = C(n,u1) * C(n-u1,u2), both exact
            const std::uint64_t w = binomial(n, u1) * binomial(n - u1, u2);
            out.push_back({u1, u2, u3, w});
        }
    }
    return out;
}

} // namespace hcn::math
