// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "secbeam/hermitian.hpp"

namespace secbeam {

// Stream tags for substream derivation (see Rng below). Fixed constants:
// changing them changes every realization, so they are part of the
// reproducibility contract.
enum : std::uint64_t {
    kStreamReceiver = 1,     // (seed, kStreamReceiver, trial, receiver): distance + fading draws
    kStreamEavesdropper = 2, // (seed, kStreamEavesdropper, trial): Monte Carlo verification draws
    kStreamRandomization = 3 // (seed, kStreamRandomization, trial): candidate direction draws
};

// Deterministic random stream. A stream is addressed by a list of 64-bit
// words (seed, tag, indices...); the words are expanded through std::seed_seq,
// whose generation algorithm is fully specified by the standard, so the same
// address yields the same sequence on every platform. All distributions are
// implemented here (53-bit uniforms, Box-Muller normals) instead of through
// std::*_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::initializer_list<std::uint64_t> address) {
        std::vector<std::uint32_t> words;
        words.reserve(2 * address.size());
        for (std::uint64_t w : address) {
            words.push_back(static_cast<std::uint32_t>(w));
            words.push_back(static_cast<std::uint32_t>(w >> 32));
        }
        std::seed_seq seq(words.begin(), words.end());
        gen_.seed(seq);
    }

    // uniform on [0, 1) with 53 random bits
    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

    // uniform on [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal (Box-Muller, pairwise)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // circularly symmetric complex normal with E{|z|^2} = var
    cx cnormal(double var = 1.0) {
        const double s = std::sqrt(0.5 * var);
        const double re = normal();
        const double im = normal();
        return cx(s * re, s * im);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace secbeam
